#ifndef JRC_UDP_INGEST_HPP
#define JRC_UDP_INGEST_HPP

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace jrc {

/// UDP datagram source for frame payloads: each datagram becomes one
/// payload, FIFO order, bounded queue with drop-oldest accounting.
/// Empty and oversize datagrams are rejected and counted.
class PacketIngest {
public:
    struct Options {
        std::string bind_addr = "127.0.0.1";
        uint16_t port = 0; // 0 = ephemeral
        std::size_t max_payload = 4095;
        std::size_t capacity = 256;
    };

    explicit PacketIngest(Options opts);
    ~PacketIngest();

    PacketIngest(const PacketIngest&) = delete;
    PacketIngest& operator=(const PacketIngest&) = delete;

    uint16_t port() const { return port_; }

    /// Next payload in FIFO order, waiting up to the timeout.
    std::optional<std::vector<uint8_t>> pop(std::chrono::milliseconds timeout);

    uint64_t received() const;
    uint64_t dropped_overflow() const;
    uint64_t rejected_oversize() const;
    uint64_t rejected_empty() const;

    void stop();

private:
    void run();

    Options opts_;
    int fd_ = -1;
    uint16_t port_ = 0;
    std::thread thread_;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<std::vector<uint8_t>> queue_;
    bool stopping_ = false;
    uint64_t received_ = 0;
    uint64_t dropped_overflow_ = 0;
    uint64_t rejected_oversize_ = 0;
    uint64_t rejected_empty_ = 0;
};

} // namespace jrc

#endif
