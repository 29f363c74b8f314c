#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jrc/analysis.hpp"
#include "jrc/io_formats.hpp"
#include "jrc/udp_ingest.hpp"

#include <arpa/inet.h>
#include <filesystem>
#include <fstream>
#include <netinet/in.h>
#include <random>
#include <sys/socket.h>
#include <unistd.h>

using namespace jrc;

namespace {

std::string tmp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / name).string();
}

std::vector<char> file_bytes(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    return { std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>() };
}

} // namespace

TEST_CASE("IQ file round trip is byte-identical")
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<cplx> samples(1000);
    for (auto& s : samples)
        s = cplx(dist(rng), dist(rng));

    io::IqMeta meta;
    meta.sample_rate = 125e6;
    meta.carrier_hz = 24e9;
    meta.chain_id = 2;
    meta.frame_markers = { 0, 720 };

    const std::string p1 = tmp_path("jrc_iq_a.iq");
    const std::string p2 = tmp_path("jrc_iq_b.iq");
    io::write_iq(p1, samples, meta);

    io::IqMeta back;
    auto loaded = io::read_iq(p1, &back);
    CHECK(back.sample_rate == 125e6);
    CHECK(back.chain_id == 2);
    CHECK(back.frame_markers == meta.frame_markers);
    REQUIRE(loaded.size() == samples.size());

    io::write_iq(p2, loaded, back);
    CHECK(file_bytes(p1) == file_bytes(p2));

    // quantization to float32 is within 1e-6 relative
    for (std::size_t i = 0; i < samples.size(); ++i)
        CHECK(std::abs(loaded[i] - samples[i]) < 1e-6 * (1.0 + std::abs(samples[i])));

    std::filesystem::remove(p1);
    std::filesystem::remove(p1 + ".json");
    std::filesystem::remove(p2);
    std::filesystem::remove(p2 + ".json");
}

TEST_CASE("malformed IQ files are rejected")
{
    const std::string p = tmp_path("jrc_iq_bad.iq");
    {
        std::ofstream os(p, std::ios::binary);
        const char junk[13] = { 0 };
        os.write(junk, sizeof(junk)); // not divisible by 8
    }
    CHECK_THROWS(io::read_iq(p));
    std::filesystem::remove(p);
}

TEST_CASE("feedback file: atomic write, exact read-back")
{
    SystemConfig cfg = SystemConfig::defaults();
    std::mt19937_64 rng(2);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<cplx> h(static_cast<std::size_t>(cfg.n_subcarriers) * cfg.n_tx, cplx(0, 0));
    for (int n : cfg.occupied_carriers())
        for (int l = 0; l < cfg.n_tx; ++l)
            h[static_cast<std::size_t>(n) * cfg.n_tx + l] = cplx(dist(rng), dist(rng));

    const std::string p = tmp_path("jrc_feedback.txt");
    io::write_feedback(p, h, cfg);
    CHECK(!std::filesystem::exists(p + ".tmp")); // rename completed

    auto back = io::read_feedback(p, cfg);
    REQUIRE(back.size() == h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        CHECK(std::abs(back[i] - h[i]) <= 1e-7 * (1.0 + std::abs(h[i])));
    std::filesystem::remove(p);
}

TEST_CASE("si state file round trip")
{
    SystemConfig cfg = SystemConfig::defaults();
    MeasurementMatrix m(cfg.n_subcarriers, cfg.n_virtual());
    std::mt19937_64 rng(3);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (auto& v : m.h)
        v = cplx(dist(rng), dist(rng));

    const std::string p = tmp_path("jrc_si.txt");
    io::write_si_state(p, m);
    auto back = io::read_si_state(p);
    CHECK(back.n_sc == m.n_sc);
    CHECK(back.n_virt == m.n_virt);
    for (std::size_t i = 0; i < m.h.size(); ++i)
        CHECK(std::abs(back.h[i] - m.h[i]) <= 1e-7 * (1.0 + std::abs(m.h[i])));
    std::filesystem::remove(p);
}

TEST_CASE("image file carries both axes and the full grid")
{
    SystemConfig cfg = SystemConfig::defaults();
    Scene scene;
    scene.noise_power = 1e-4;
    scene.targets = { PointTarget{ 6.0, 0.0, 1.0, 0.0 } };
    auto img = range_angle_image(radar_measure(scene, cfg), cfg);

    const std::string p = tmp_path("jrc_image.csv");
    io::write_image(p, img);

    std::ifstream is(p);
    std::string line;
    int rows = 0;
    std::size_t cols = 0;
    while (std::getline(is, line)) {
        std::size_t commas = std::count(line.begin(), line.end(), ',');
        if (rows == 0)
            cols = commas + 1;
        else
            CHECK(commas + 1 == cols);
        ++rows;
    }
    CHECK(rows == cfg.range_fft_size + 1);
    CHECK(cols == static_cast<std::size_t>(cfg.angle_fft_size) + 1);
    std::filesystem::remove(p);
}

TEST_CASE("config document round trip preserves every field")
{
    SystemConfig cfg = SystemConfig::defaults();
    cfg.bandwidth_hz = 200e6;
    cfg.range_window = WindowKind::Hann;

    const std::string p = tmp_path("jrc_config.json");
    io::save_config(p, cfg);
    auto back = io::load_config(p);
    CHECK(back.carrier_hz == cfg.carrier_hz);
    CHECK(back.bandwidth_hz == cfg.bandwidth_hz);
    CHECK(back.n_subcarriers == cfg.n_subcarriers);
    CHECK(back.cyclic_prefix == cfg.cyclic_prefix);
    CHECK(back.data_carriers == cfg.data_carriers);
    CHECK(back.pilot_carriers == cfg.pilot_carriers);
    CHECK(back.guard_carriers == cfg.guard_carriers);
    CHECK(back.pilot_values == cfg.pilot_values);
    CHECK(back.range_window == cfg.range_window);
    CHECK(back.angle_window == cfg.angle_window);

    // a second save of the loaded config is byte-identical
    const std::string p2 = tmp_path("jrc_config2.json");
    io::save_config(p2, back);
    CHECK(file_bytes(p) == file_bytes(p2));

    CHECK(io::load_config_or_defaults("paper-defaults").n_subcarriers == 64);
    CHECK_THROWS(io::load_config("/nonexistent/config.json"));

    std::filesystem::remove(p);
    std::filesystem::remove(p2);
}

TEST_CASE("scene document round trip")
{
    Scene s;
    s.targets = { PointTarget{ 6.0, -10.0, 1.5, 0.0 }, PointTarget{ 6.0, 10.0, 1.5, 0.0 } };
    s.clutter = { PointTarget{ 2.0, 5.0, 4.0, 0.0 } };
    s.si.amplitude = 0.7;
    s.noise_power = 2e-3;
    s.radar_pl_exponent = 3.43;
    s.comm_pl_exponent = 1.64;
    s.element_taper_q = 2.9;
    s.cfo_hz = 100e3;
    s.rng_seed = 99;

    const std::string p = tmp_path("jrc_scene.json");
    io::save_scene(p, s);
    auto back = io::load_scene(p);
    CHECK(back.targets.size() == 2);
    CHECK(back.clutter.size() == 1);
    CHECK(back.targets[0].angle_deg == -10.0);
    CHECK(back.si.amplitude == 0.7);
    CHECK(back.noise_power == 2e-3);
    CHECK(back.radar_pl_exponent == 3.43);
    CHECK(back.comm_pl_exponent == 1.64);
    CHECK(back.element_taper_q == 2.9);
    CHECK(back.cfo_hz == 100e3);
    CHECK(back.rng_seed == 99);
    std::filesystem::remove(p);
}

TEST_CASE("detection log appends parseable records")
{
    const std::string p = tmp_path("jrc_dets.jsonl");
    std::filesystem::remove(p);
    Detection d;
    d.range_m = 6.0;
    d.angle_deg = -10.0;
    d.snr_db = 22.5;
    io::append_detections(p, 3, { d, d });
    io::append_detections(p, 4, { d });

    std::ifstream is(p);
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) {
        ++lines;
        CHECK(line.find("\"range_m\"") != std::string::npos);
        CHECK(line.find("\"frame\"") != std::string::npos);
    }
    CHECK(lines == 3);
    std::filesystem::remove(p);
}

namespace {

void send_udp(uint16_t port, const std::vector<uint8_t>& data)
{
    int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
    REQUIRE(fd >= 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    ::sendto(fd, data.data(), data.size(), 0, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
    ::close(fd);
}

} // namespace

TEST_CASE("udp ingestion: FIFO order, empty and oversize rejection")
{
    PacketIngest::Options opts;
    opts.max_payload = 64;
    PacketIngest ingest(opts);
    REQUIRE(ingest.port() != 0);

    send_udp(ingest.port(), { 'a', 'b', 'c' });
    send_udp(ingest.port(), { 'd' });
    send_udp(ingest.port(), { 'e', 'f' });

    auto p1 = ingest.pop(std::chrono::milliseconds(2000));
    auto p2 = ingest.pop(std::chrono::milliseconds(2000));
    auto p3 = ingest.pop(std::chrono::milliseconds(2000));
    REQUIRE(p1.has_value());
    REQUIRE(p2.has_value());
    REQUIRE(p3.has_value());
    CHECK(*p1 == std::vector<uint8_t>({ 'a', 'b', 'c' }));
    CHECK(*p2 == std::vector<uint8_t>({ 'd' }));
    CHECK(*p3 == std::vector<uint8_t>({ 'e', 'f' }));

    // empty datagram -> rejected
    send_udp(ingest.port(), {});
    // oversize datagram -> rejected
    send_udp(ingest.port(), std::vector<uint8_t>(65, 0x55));
    auto none = ingest.pop(std::chrono::milliseconds(300));
    CHECK(!none.has_value());
    CHECK(ingest.rejected_empty() == 1);
    CHECK(ingest.rejected_oversize() == 1);
    CHECK(ingest.received() == 3);

    // sustained burst with no drops below capacity
    for (int i = 0; i < 100; ++i)
        send_udp(ingest.port(), { static_cast<uint8_t>(i) });
    int got = 0;
    while (auto p = ingest.pop(std::chrono::milliseconds(500))) {
        CHECK((*p)[0] == static_cast<uint8_t>(got));
        ++got;
        if (got == 100)
            break;
    }
    CHECK(got == 100);
    CHECK(ingest.dropped_overflow() == 0);
    ingest.stop();
}
