#include "jrc/udp_ingest.hpp"

#include <cstring>
#include <stdexcept>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

namespace jrc {

PacketIngest::PacketIngest(Options opts)
    : opts_(std::move(opts))
{
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0)
        throw std::runtime_error("PacketIngest: socket() failed");

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(opts_.port);
    if (::inet_pton(AF_INET, opts_.bind_addr.c_str(), &addr.sin_addr) != 1) {
        ::close(fd_);
        throw std::runtime_error("PacketIngest: bad bind address " + opts_.bind_addr);
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd_);
        throw std::runtime_error("PacketIngest: bind failed on " + opts_.bind_addr + ":"
                                 + std::to_string(opts_.port));
    }
    socklen_t len = sizeof(addr);
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);

    thread_ = std::thread([this] { run(); });
}

PacketIngest::~PacketIngest()
{
    stop();
}

void PacketIngest::stop()
{
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (stopping_)
            return;
        stopping_ = true;
    }
    cv_.notify_all();
    if (thread_.joinable())
        thread_.join();
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

void PacketIngest::run()
{
    std::vector<uint8_t> buf(opts_.max_payload + 1);
    for (;;) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            if (stopping_)
                return;
        }
        pollfd pfd{ fd_, POLLIN, 0 };
        int rv = ::poll(&pfd, 1, 50);
        if (rv <= 0)
            continue;
        ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
        if (n < 0)
            continue;

        std::lock_guard<std::mutex> lock(mu_);
        if (n == 0) {
            ++rejected_empty_;
            continue;
        }
        if (static_cast<std::size_t>(n) > opts_.max_payload) {
            ++rejected_oversize_;
            continue;
        }
        ++received_;
        queue_.emplace_back(buf.begin(), buf.begin() + n);
        while (queue_.size() > opts_.capacity) {
            queue_.pop_front();
            ++dropped_overflow_;
        }
        cv_.notify_one();
    }
}

std::optional<std::vector<uint8_t>> PacketIngest::pop(std::chrono::milliseconds timeout)
{
    std::unique_lock<std::mutex> lock(mu_);
    if (!cv_.wait_for(lock, timeout, [this] { return !queue_.empty() || stopping_; }))
        return std::nullopt;
    if (queue_.empty())
        return std::nullopt;
    auto payload = std::move(queue_.front());
    queue_.pop_front();
    return payload;
}

uint64_t PacketIngest::received() const
{
    std::lock_guard<std::mutex> lock(mu_);
    return received_;
}

uint64_t PacketIngest::dropped_overflow() const
{
    std::lock_guard<std::mutex> lock(mu_);
    return dropped_overflow_;
}

uint64_t PacketIngest::rejected_oversize() const
{
    std::lock_guard<std::mutex> lock(mu_);
    return rejected_oversize_;
}

uint64_t PacketIngest::rejected_empty() const
{
    std::lock_guard<std::mutex> lock(mu_);
    return rejected_empty_;
}

} // namespace jrc
