// Command-line driver: waveform generation, channel simulation, radar
// processing, packet reception, and the scripted desk-scale experiments.

#include "jrc/analysis.hpp"
#include "jrc/channel_sim.hpp"
#include "jrc/io_formats.hpp"
#include "jrc/kernels.hpp"
#include "jrc/radar.hpp"
#include "jrc/rx_receiver.hpp"
#include "jrc/tx_pipeline.hpp"
#include "jrc/udp_ingest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

namespace fs = std::filesystem;
using namespace jrc;

namespace {

constexpr int kExitConfig = 2;   // unreadable or invalid config/scene
constexpr int kExitInput = 3;    // malformed IQ or state file
constexpr int kExitContract = 4; // a stage contract did not hold

struct CommonArgs {
    std::string config = "paper-defaults";
    std::string backend = "auto";
    uint64_t seed = 1;
};

SystemConfig load_cfg(const CommonArgs& args)
{
    kernels::set_backend(args.backend);
    SystemConfig cfg = io::load_config_or_defaults(args.config);
    require_valid(cfg);
    return cfg;
}

std::vector<uint8_t> make_payload(std::size_t n, uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<uint8_t> p(n);
    for (auto& b : p)
        b = static_cast<uint8_t>(rng() & 0xFF);
    return p;
}

std::string chain_path(const std::string& dir, const char* prefix, int chain)
{
    return (fs::path(dir) / (std::string(prefix) + std::to_string(chain) + ".iq")).string();
}

void write_chains(const std::string& dir, const char* prefix,
                  const std::vector<std::vector<cplx>>& chains, const SystemConfig& cfg,
                  const std::vector<uint64_t>& markers)
{
    fs::create_directories(dir);
    for (std::size_t k = 0; k < chains.size(); ++k) {
        io::IqMeta meta;
        meta.sample_rate = cfg.bandwidth_hz;
        meta.carrier_hz = cfg.carrier_hz;
        meta.chain_id = static_cast<int>(k);
        meta.frame_markers = markers;
        io::write_iq(chain_path(dir, prefix, static_cast<int>(k)), chains[k], meta);
    }
}

std::vector<std::vector<cplx>> read_chains(const std::string& dir, const char* prefix, int count,
                                           std::vector<uint64_t>* markers = nullptr)
{
    std::vector<std::vector<cplx>> chains(count);
    for (int k = 0; k < count; ++k) {
        io::IqMeta meta;
        chains[k] = io::read_iq(chain_path(dir, prefix, k), &meta);
        if (markers && k == 0)
            *markers = meta.frame_markers;
    }
    return chains;
}

SteeringMatrix steering_or_identity(const std::string& feedback_path, const SystemConfig& cfg)
{
    if (feedback_path.empty() || !fs::exists(feedback_path)) {
        if (!feedback_path.empty())
            std::cerr << "warning: feedback file not found, using identity steering: "
                      << feedback_path << "\n";
        return SteeringMatrix::identity(cfg);
    }
    auto fb = io::read_feedback(feedback_path, cfg);
    return compute_steering(fb, cfg.n_subcarriers, cfg.n_tx, cfg);
}

struct FrameBatch {
    std::vector<std::vector<cplx>> chains; // concatenated frames per TX chain
    std::vector<uint64_t> markers;
    std::vector<FrameGrid> grids;
};

FrameBatch build_frames(const std::vector<std::vector<uint8_t>>& payloads, FrameKind kind, Mcs mcs,
                        const SteeringMatrix& steering, const SystemConfig& cfg)
{
    FrameBatch batch;
    batch.chains.resize(cfg.n_tx);
    OfdmModem modem(cfg);
    std::size_t pos = 0;
    const std::size_t count = kind == FrameKind::NDP ? std::max<std::size_t>(payloads.size(), 1)
                                                     : payloads.size();
    for (std::size_t i = 0; i < count; ++i) {
        FrameGrid grid;
        if (kind == FrameKind::NDP) {
            grid = assemble_frame(nullptr, FrameKind::NDP, steering, cfg);
        } else {
            auto stream = encode_stream(payloads[i], mcs, cfg);
            grid = assemble_frame(&stream, FrameKind::DATA, steering, cfg);
        }
        TxBaseband bb = modem.modulate(grid);
        batch.markers.push_back(pos);
        pos += bb.samples();
        for (int l = 0; l < cfg.n_tx; ++l)
            batch.chains[l].insert(batch.chains[l].end(), bb.chains[l].begin(),
                                   bb.chains[l].end());
        batch.grids.push_back(std::move(grid));
    }
    return batch;
}

void print_detections(const std::vector<Detection>& dets, uint64_t frame)
{
    for (const auto& d : dets)
        std::printf("  frame %3llu  range %6.2f m  angle %+7.2f deg  snr %5.1f dB\n",
                    static_cast<unsigned long long>(frame), d.range_m, d.angle_deg, d.snr_db);
}

// ---------------------------------------------------------------- tx

int cmd_tx(const CommonArgs& common, const std::string& out_dir, const std::string& kind_str,
           const std::string& mcs_str, std::size_t payload_size, const std::string& payload_file,
           int frames, const std::string& feedback, int listen_port, double listen_seconds)
{
    SystemConfig cfg = load_cfg(common);
    FrameKind kind = kind_str == "ndp" ? FrameKind::NDP : FrameKind::DATA;
    Mcs mcs = Mcs::parse(mcs_str);
    SteeringMatrix steering = steering_or_identity(feedback, cfg);

    std::vector<std::vector<uint8_t>> payloads;
    if (kind == FrameKind::DATA) {
        if (listen_port > 0) {
            PacketIngest::Options popts;
            popts.port = static_cast<uint16_t>(listen_port);
            PacketIngest ingest(popts);
            std::cout << "listening for datagrams on udp port " << ingest.port() << "...\n";
            auto deadline = std::chrono::steady_clock::now()
                + std::chrono::milliseconds(static_cast<long>(listen_seconds * 1000));
            while (std::chrono::steady_clock::now() < deadline) {
                if (auto p = ingest.pop(std::chrono::milliseconds(100)))
                    payloads.push_back(std::move(*p));
            }
            std::cout << "captured " << payloads.size() << " datagrams (dropped "
                      << ingest.dropped_overflow() << ", oversize " << ingest.rejected_oversize()
                      << ")\n";
        } else if (!payload_file.empty()) {
            std::ifstream is(payload_file, std::ios::binary);
            if (!is) {
                std::cerr << "cannot read payload file: " << payload_file << "\n";
                return kExitInput;
            }
            std::vector<uint8_t> data{ std::istreambuf_iterator<char>(is),
                                       std::istreambuf_iterator<char>() };
            payloads.assign(frames, data);
        } else {
            for (int i = 0; i < frames; ++i)
                payloads.push_back(make_payload(payload_size, common.seed + i));
        }
        if (payloads.empty()) {
            std::cerr << "no payloads to transmit\n";
            return kExitContract;
        }
    } else {
        payloads.resize(std::max(frames, 1));
    }

    FrameBatch batch = build_frames(payloads, kind, mcs, steering, cfg);
    write_chains(out_dir, "tx_chain", batch.chains, cfg, batch.markers);
    std::cout << "wrote " << batch.markers.size() << " " << (kind == FrameKind::NDP ? "NDP" : "DATA")
              << " frame(s), " << batch.chains[0].size() << " samples per chain, to " << out_dir
              << "\n";
    return 0;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const CommonArgs& common, const std::string& scene_path, const std::string& in_dir,
                 const std::string& out_dir, const std::string& mode, double distance, double angle)
{
    SystemConfig cfg = load_cfg(common);
    Scene scene = io::load_scene(scene_path);
    if (common.seed != 1)
        scene.rng_seed = common.seed;

    std::vector<uint64_t> markers;
    TxBaseband tx;
    tx.sample_rate = cfg.bandwidth_hz;
    tx.chains = read_chains(in_dir, "tx_chain", cfg.n_tx, &markers);

    if (mode == "radar") {
        RxBaseband rx = simulate_radar(tx, scene, cfg);
        write_chains(out_dir, "rx_chain", rx.chains, cfg, markers);
        std::cout << "radar return written to " << out_dir << "\n";
    } else {
        std::size_t start = 0;
        auto stream = simulate_comm(tx, distance, angle, scene, cfg, &start);
        fs::create_directories(out_dir);
        io::IqMeta meta;
        meta.sample_rate = cfg.bandwidth_hz;
        meta.carrier_hz = cfg.carrier_hz;
        meta.chain_id = 0;
        meta.frame_markers = { start };
        io::write_iq((fs::path(out_dir) / "rx_comm.iq").string(), stream, meta);
        std::cout << "comm stream written to " << out_dir << "/rx_comm.iq (frame at sample "
                  << start << ")\n";
    }
    return 0;
}

// ---------------------------------------------------------------- radar

int cmd_radar(const CommonArgs& common, const std::string& tx_dir, const std::string& rx_dir,
              const std::string& image_path, const std::string& det_path,
              const std::string& si_path, bool use_global_peak, double pfa)
{
    SystemConfig cfg = load_cfg(common);
    std::vector<uint64_t> markers;
    auto tx_chains = read_chains(tx_dir, "tx_chain", cfg.n_tx, &markers);
    auto rx_chains = read_chains(rx_dir, "rx_chain", cfg.n_rx);
    if (markers.empty())
        markers.push_back(0);

    SiCanceller canceller;
    if (!si_path.empty()) {
        canceller.load_estimate(io::read_si_state(si_path));
        canceller.set_active(true);
    }

    OfdmModem modem(cfg);
    CfarParams cfar;
    cfar.pfa = pfa;
    if (!det_path.empty())
        fs::remove(det_path);

    RangeAngleImage last_image;
    for (std::size_t f = 0; f < markers.size(); ++f) {
        const std::size_t start = markers[f];
        const std::size_t end = f + 1 < markers.size() ? markers[f + 1] : rx_chains[0].size();
        const int n_sym = static_cast<int>((end - start) / cfg.symbol_samples());

        ComplexGrid tx_grid = modem.demodulate(tx_chains, n_sym, start);
        ComplexGrid rx_grid = modem.demodulate(rx_chains, n_sym, start);

        // reconstruct the known frame layout from the transmitted grid
        FrameGrid known;
        known.layout.n_tx = cfg.n_tx;
        known.layout.n_data = n_sym - known.layout.data_offset();
        known.grid = tx_grid;

        MeasurementMatrix m = estimate_radar_channel(rx_grid, known, cfg);
        m.frame_index = f;
        MeasurementMatrix cleaned = canceller.remove(m);
        last_image = range_angle_image(cleaned, cfg);

        std::vector<Detection> dets = use_global_peak
            ? std::vector<Detection>{ detect_global_peak(last_image) }
            : detect_cfar(last_image, cfar);
        print_detections(dets, f);
        if (!det_path.empty())
            io::append_detections(det_path, f, dets);
    }
    if (!image_path.empty()) {
        io::write_image(image_path, last_image);
        std::cout << "image written to " << image_path << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- si-capture

int cmd_si_capture(const CommonArgs& common, const std::string& tx_dir, const std::string& rx_dir,
                   int win, const std::string& out_path)
{
    SystemConfig cfg = load_cfg(common);
    std::vector<uint64_t> markers;
    auto tx_chains = read_chains(tx_dir, "tx_chain", cfg.n_tx, &markers);
    auto rx_chains = read_chains(rx_dir, "rx_chain", cfg.n_rx);
    if (markers.empty())
        markers.push_back(0);

    OfdmModem modem(cfg);
    SiCanceller canceller(win);
    for (std::size_t f = 0; f < markers.size(); ++f) {
        const std::size_t start = markers[f];
        const std::size_t end = f + 1 < markers.size() ? markers[f + 1] : rx_chains[0].size();
        const int n_sym = static_cast<int>((end - start) / cfg.symbol_samples());
        ComplexGrid tx_grid = modem.demodulate(tx_chains, n_sym, start);
        ComplexGrid rx_grid = modem.demodulate(rx_chains, n_sym, start);
        FrameGrid known;
        known.layout.n_tx = cfg.n_tx;
        known.layout.n_data = n_sym - known.layout.data_offset();
        known.grid = tx_grid;
        canceller.capture(estimate_radar_channel(rx_grid, known, cfg));
    }
    if (canceller.captured() == 0) {
        std::cerr << "no frames captured\n";
        return kExitContract;
    }
    if (canceller.provisional())
        std::cerr << "warning: provisional estimate (" << canceller.captured() << " of " << win
                  << " frames)\n";
    io::write_si_state(out_path, canceller.estimate());
    std::cout << "background estimate over " << canceller.captured() << " frame(s) written to "
              << out_path << "\n";
    return 0;
}

// ---------------------------------------------------------------- rx

int cmd_rx(const CommonArgs& common, const std::string& in_path, const std::string& out_path,
           const std::string& feedback, const std::string& estimator)
{
    SystemConfig cfg = load_cfg(common);
    auto stream = io::read_iq(in_path);

    ReceiverOptions opts;
    opts.feedback_path = feedback;
    opts.estimator = estimator == "sta" ? EstimatorKind::Sta : EstimatorKind::Ls;
    Receiver receiver(cfg, opts);
    auto packets = receiver.process(stream);

    std::ofstream os;
    if (!out_path.empty()) {
        os.open(out_path, std::ios::trunc);
        if (!os) {
            std::cerr << "cannot open output: " << out_path << "\n";
            return kExitInput;
        }
    }
    for (const auto& p : packets) {
        std::printf("frame %3llu  %s  %-9s  len %4zu  snr %5.1f dB  crc %s\n",
                    static_cast<unsigned long long>(p.frame_index),
                    p.kind == FrameKind::NDP ? "NDP " : "DATA", p.mcs.name().c_str(),
                    p.payload.size(), p.snr_db, p.crc_ok ? "ok" : "FAIL");
        if (os) {
            os << "{\"frame\":" << p.frame_index << ",\"kind\":\""
               << (p.kind == FrameKind::NDP ? "ndp" : "data") << "\",\"mcs\":\"" << p.mcs.name()
               << "\",\"len\":" << p.payload.size() << ",\"snr_db\":" << p.snr_db
               << ",\"crc_ok\":" << (p.crc_ok ? "true" : "false") << "}\n";
        }
    }
    std::cout << packets.size() << " packet(s), " << receiver.header_failures()
              << " header failure(s)\n";
    return 0;
}

// ---------------------------------------------------------------- loopback

int cmd_loopback(const CommonArgs& common, int frames, std::size_t payload_size,
                 const std::string& mcs_str, double snr_db, double cfo_hz, double distance,
                 double angle, int si_win)
{
    SystemConfig cfg = load_cfg(common);
    Mcs mcs = Mcs::parse(mcs_str);
    SystemConfig radar_cfg = cfg;
    radar_cfg.range_window = WindowKind::Hann;

    // the remote platform carries a reflector: the radar tracks it while
    // the data link runs
    Scene background = default_background();
    Scene scene = background;
    scene.targets = { PointTarget{ distance, angle, 1.0, 0.0 } };
    scene.cfo_hz = cfo_hz;

    // background capture before the reflector enters the scene
    SiCanceller canceller(si_win);
    for (int i = 0; i < si_win; ++i) {
        Scene bg = background;
        bg.rng_seed = derive_seed(common.seed, 900, static_cast<uint64_t>(i));
        canceller.capture(radar_measure(bg, radar_cfg));
    }
    canceller.set_active(true);

    // comm noise from the requested SNR at this distance
    auto probe_payload = make_payload(payload_size, common.seed);
    auto probe_stream = encode_stream(probe_payload, mcs, cfg);
    auto probe_grid = assemble_frame(&probe_stream, FrameKind::DATA, SteeringMatrix::identity(cfg), cfg);
    auto probe_tx = ofdm_modulate(probe_grid, cfg);
    Scene probe_scene;
    const double rx_power = comm_mean_power(probe_tx, distance, angle, probe_scene, cfg);
    scene.noise_power = rx_power / std::pow(10.0, snr_db / 10.0);

    CfarParams cfar{ 10, 8, 6, 1e-12 };
    OfdmModem modem(cfg);
    Receiver receiver(cfg);

    int crc_ok = 0, decoded = 0, radar_hits = 0;
    double snr_sum = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int f = 0; f < frames; ++f) {
        auto payload = make_payload(payload_size, derive_seed(common.seed, 1, f));
        auto stream = encode_stream(payload, mcs, cfg);
        auto grid = assemble_frame(&stream, FrameKind::DATA, SteeringMatrix::identity(cfg), cfg);
        auto tx = modem.modulate(grid);

        // monostatic radar leg
        Scene frame_scene = scene;
        frame_scene.rng_seed = derive_seed(common.seed, 2, f);
        RxBaseband reflections = simulate_radar(tx, frame_scene, radar_cfg);
        auto m = estimate_radar_channel(modem.demodulate(reflections.chains,
                                                         grid.layout.total_symbols()),
                                        grid, radar_cfg);
        auto img = range_angle_image(canceller.remove(m), radar_cfg);
        auto dets = detect_cfar(img, cfar);
        if (!dets.empty() && std::abs(dets[0].range_m - distance) < 1.0) {
            ++radar_hits;
            if (f < 3 || f == frames - 1)
                print_detections({ dets[0] }, f);
        }

        // one-way comm leg
        frame_scene.rng_seed = derive_seed(common.seed, 3, f);
        auto rx_stream = simulate_comm(tx, distance, angle, frame_scene, cfg);
        auto packets = receiver.process(rx_stream);
        if (packets.size() == 1 && packets[0].kind == FrameKind::DATA) {
            ++decoded;
            snr_sum += packets[0].snr_db;
            if (packets[0].crc_ok && packets[0].payload == payload)
                ++crc_ok;
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();

    const double per = frames > 0 ? 100.0 * (frames - crc_ok) / frames : 0.0;
    std::printf("frames        : %d\n", frames);
    std::printf("decoded       : %d\n", decoded);
    std::printf("crc ok        : %d  (PER %.2f%%)\n", crc_ok, per);
    std::printf("mean comm snr : %.1f dB\n", decoded ? snr_sum / decoded : 0.0);
    std::printf("radar hits    : %d / %d\n", radar_hits, frames);
    std::printf("elapsed       : %.2f s (%.1f ms/frame)\n", secs, 1000.0 * secs / frames);

    if (decoded != frames || radar_hits != frames) {
        std::cerr << "stage contract violated: missed frames or radar detections\n";
        return kExitContract;
    }
    return 0;
}

// ---------------------------------------------------------------- sweeps

int cmd_sweep_distance(const CommonArgs& common, double from, double to, double step, int seeds,
                       const std::string& mode, double exponent, double noise, double d0,
                       const std::string& out_csv)
{
    SystemConfig cfg = load_cfg(common);
    std::vector<double> distances;
    for (double d = from; d <= to + 1e-9; d += step)
        distances.push_back(d);

    DistanceSweepResult result;
    if (mode == "radar") {
        SystemConfig sweep_cfg = cfg;
        sweep_cfg.range_window = WindowKind::Hann;
        RadarSweepOptions opts;
        opts.scene_template.noise_power = noise;
        opts.scene_template.radar_pl_exponent = exponent;
        opts.seeds = seeds;
        opts.seed_base = common.seed;
        opts.d0 = d0;
        result = run_distance_sweep(distances, opts, sweep_cfg);
    } else {
        CommSweepOptions opts;
        opts.scene_template.noise_power = noise;
        opts.scene_template.comm_pl_exponent = exponent;
        opts.seeds = seeds;
        opts.seed_base = common.seed;
        opts.d0 = d0;
        result = run_comm_distance_sweep(distances, opts, cfg);
    }

    std::printf("# distance_m  snr_db  reps\n");
    for (const auto& r : result.records)
        std::printf("%8.2f  %7.2f  %d%s\n", r.x, r.snr_db, r.reps, r.missed ? "  (missed)" : "");
    std::printf("fit: alpha %.4f, beta %.2f dB at d0 %.1f m, residual %.3f\n", result.fit.alpha,
                result.fit.beta, result.fit.d0, result.fit.residual);

    if (!out_csv.empty()) {
        std::ofstream os(out_csv, std::ios::trunc);
        os << "distance_m,snr_db,reps,missed\n";
        for (const auto& r : result.records)
            os << r.x << ',' << r.snr_db << ',' << r.reps << ',' << (r.missed ? 1 : 0) << '\n';
        os << "# alpha," << result.fit.alpha << ",beta," << result.fit.beta << ",d0,"
           << result.fit.d0 << '\n';
    }
    return result.missed_points == 0 ? 0 : kExitContract;
}

int cmd_sweep_angle(const CommonArgs& common, double from, double to, double step, int seeds,
                    double range_m, double taper_q, double noise, const std::string& out_csv)
{
    SystemConfig cfg = load_cfg(common);
    std::vector<double> angles;
    for (double a = from; a <= to + 1e-9; a += step)
        angles.push_back(a);

    RadarSweepOptions opts;
    opts.scene_template.noise_power = noise;
    opts.scene_template.element_taper_q = taper_q;
    opts.seeds = seeds;
    opts.seed_base = common.seed;

    auto result = run_angle_sweep(angles, range_m, opts, cfg);
    std::printf("# angle_deg  snr_db  reps\n");
    for (const auto& r : result.records)
        std::printf("%8.2f  %7.2f  %d\n", r.x, r.snr_db, r.reps);
    if (result.fov_bounded)
        std::printf("3 dB field of view: %.1f deg\n", result.fov_3db);
    else
        std::printf("3 dB field of view: wider than the swept span\n");

    if (!out_csv.empty()) {
        std::ofstream os(out_csv, std::ios::trunc);
        os << "angle_deg,snr_db,reps\n";
        for (const auto& r : result.records)
            os << r.x << ',' << r.snr_db << ',' << r.reps << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------- two-target

int cmd_two_target(const CommonArgs& common, const std::string& image_path,
                   const std::string& det_path, double range_m, double angle_deg)
{
    SystemConfig cfg = load_cfg(common);
    TwoTargetOptions opts;
    opts.range_m = range_m;
    opts.angle_deg = angle_deg;
    opts.background = default_background();
    opts.seed = common.seed;

    auto report = run_two_target_report(cfg, opts);
    std::printf("detections: %zu\n", report.detections.size());
    print_detections(report.detections, 0);
    for (std::size_t i = 0; i < report.detections.size(); ++i) {
        std::printf("  target %zu widths: range %.2f m%s, angle %.2f deg%s\n", i,
                    report.range_widths[i].width, report.range_widths[i].bounded ? "" : " (unbounded)",
                    report.angle_widths[i].width, report.angle_widths[i].bounded ? "" : " (unbounded)");
    }
    if (!image_path.empty()) {
        io::write_image(image_path, report.image);
        std::cout << "image written to " << image_path << "\n";
    }
    if (!det_path.empty()) {
        fs::remove(det_path);
        io::append_detections(det_path, 0, report.detections);
    }
    if (!report.resolved) {
        std::cerr << "two-target scenario unresolved (" << report.detections.size()
                  << " detections)\n";
        return kExitContract;
    }
    return 0;
}

// ---------------------------------------------------------------- emit-config / emit-scene

int cmd_emit_config(const std::string& path)
{
    io::save_config(path, SystemConfig::defaults());
    std::cout << "default config written to " << path << "\n";
    return 0;
}

int cmd_emit_scene(const std::string& path)
{
    Scene scene = default_background();
    scene.targets = { PointTarget{ 6.0, 0.0, 1.0, 0.0 } };
    io::save_scene(path, scene);
    std::cout << "example scene written to " << path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{ "MIMO OFDM joint radar-communication baseband (desk-scale simulator)" };
    app.require_subcommand(1);

    CommonArgs common;
    app.add_option("--config", common.config, "config JSON path or 'paper-defaults'")
        ->capture_default_str();
    app.add_option("--seed", common.seed, "master RNG seed")->capture_default_str();
    app.add_option("--kernel-backend", common.backend, "scalar | avx2 | auto")
        ->capture_default_str();

    // tx
    auto* tx = app.add_subcommand("tx", "generate frames and write per-chain IQ files");
    std::string tx_out = "tx_out", tx_kind = "data", tx_mcs = "qpsk-1/2", tx_payload_file,
                tx_feedback;
    std::size_t tx_payload_size = 500;
    int tx_frames = 1, tx_listen = 0;
    double tx_listen_secs = 5.0;
    tx->add_option("--out", tx_out, "output directory")->capture_default_str();
    tx->add_option("--kind", tx_kind, "data | ndp")->capture_default_str();
    tx->add_option("--mcs", tx_mcs, "modulation and coding scheme")->capture_default_str();
    tx->add_option("--payload-size", tx_payload_size, "random payload bytes per frame");
    tx->add_option("--payload-file", tx_payload_file, "payload bytes from a file");
    tx->add_option("--frames", tx_frames, "number of frames");
    tx->add_option("--feedback", tx_feedback, "channel feedback file for precoding");
    tx->add_option("--listen-udp", tx_listen, "take payloads from this UDP port");
    tx->add_option("--listen-seconds", tx_listen_secs, "how long to collect datagrams");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run the point-target channel over a TX capture");
    std::string sim_scene, sim_in = "tx_out", sim_out = "rx_out", sim_mode = "radar";
    double sim_distance = 6.0, sim_angle = 0.0;
    sim->add_option("--scene", sim_scene, "scene JSON")->required();
    sim->add_option("--in", sim_in, "TX IQ directory")->capture_default_str();
    sim->add_option("--out", sim_out, "output directory")->capture_default_str();
    sim->add_option("--mode", sim_mode, "radar | comm")->capture_default_str();
    sim->add_option("--distance", sim_distance, "comm receiver distance, m");
    sim->add_option("--angle", sim_angle, "comm receiver bearing, deg");

    // radar
    auto* radar = app.add_subcommand("radar", "estimate, image, and detect from reflections");
    std::string radar_tx = "tx_out", radar_rx = "rx_out", radar_img = "image.csv",
                radar_det = "detections.jsonl", radar_si;
    bool radar_peak = false;
    double radar_pfa = 1e-4;
    radar->add_option("--tx-in", radar_tx, "TX IQ directory")->capture_default_str();
    radar->add_option("--rx-in", radar_rx, "RX IQ directory")->capture_default_str();
    radar->add_option("--out-image", radar_img, "heatmap CSV")->capture_default_str();
    radar->add_option("--detections", radar_det, "detection log (JSON lines)")
        ->capture_default_str();
    radar->add_option("--si", radar_si, "background state file to subtract");
    radar->add_flag("--global-peak", radar_peak, "report only the global peak");
    radar->add_option("--pfa", radar_pfa, "CFAR false-alarm rate")->capture_default_str();

    // si-capture
    auto* sicap = app.add_subcommand("si-capture", "average frames into a background state file");
    std::string si_tx = "tx_out", si_rx = "rx_out", si_out = "si_state.txt";
    int si_win = 10;
    sicap->add_option("--tx-in", si_tx, "TX IQ directory")->capture_default_str();
    sicap->add_option("--rx-in", si_rx, "RX IQ directory")->capture_default_str();
    sicap->add_option("--win", si_win, "window depth")->capture_default_str();
    sicap->add_option("--out", si_out, "state file")->capture_default_str();

    // rx
    auto* rx = app.add_subcommand("rx", "decode a SISO IQ capture");
    std::string rx_in, rx_out, rx_feedback, rx_estimator = "ls";
    rx->add_option("--in", rx_in, "IQ file")->required();
    rx->add_option("--out", rx_out, "decoded packet log (JSON lines)");
    rx->add_option("--feedback", rx_feedback, "write NDP channel estimates here");
    rx->add_option("--estimator", rx_estimator, "ls | sta")->capture_default_str();

    // loopback
    auto* loop = app.add_subcommand("loopback", "end-to-end: tx -> channel -> radar and rx");
    int loop_frames = 10, loop_si_win = 10;
    std::size_t loop_payload = 500;
    std::string loop_mcs = "qam16-3/4";
    double loop_snr = 25.0, loop_cfo = 0.0, loop_distance = 6.0, loop_angle = 10.0;
    loop->add_option("--frames", loop_frames, "DATA frames to run")->capture_default_str();
    loop->add_option("--payload-size", loop_payload, "payload bytes")->capture_default_str();
    loop->add_option("--mcs", loop_mcs, "modulation and coding scheme")->capture_default_str();
    loop->add_option("--snr", loop_snr, "comm receiver SNR, dB")->capture_default_str();
    loop->add_option("--cfo", loop_cfo, "injected CFO, Hz")->capture_default_str();
    loop->add_option("--distance", loop_distance, "receiver distance, m")->capture_default_str();
    loop->add_option("--angle", loop_angle, "receiver bearing, deg")->capture_default_str();
    loop->add_option("--si-win", loop_si_win, "background capture depth")->capture_default_str();

    // sweep-distance
    auto* swd = app.add_subcommand("sweep-distance", "SNR vs distance with a path-loss fit");
    double swd_from = 3.0, swd_to = 12.0, swd_step = 0.5, swd_exp = 4.0, swd_noise = 5e-5,
           swd_d0 = 7.0;
    int swd_seeds = 20;
    std::string swd_mode = "radar", swd_csv;
    swd->add_option("--from", swd_from)->capture_default_str();
    swd->add_option("--to", swd_to)->capture_default_str();
    swd->add_option("--step", swd_step)->capture_default_str();
    swd->add_option("--seeds", swd_seeds)->capture_default_str();
    swd->add_option("--mode", swd_mode, "radar | comm")->capture_default_str();
    swd->add_option("--exponent", swd_exp, "simulator path-loss exponent")->capture_default_str();
    swd->add_option("--noise", swd_noise, "noise power")->capture_default_str();
    swd->add_option("--d0", swd_d0, "reference distance")->capture_default_str();
    swd->add_option("--out", swd_csv, "CSV output path");

    // sweep-angle
    auto* swa = app.add_subcommand("sweep-angle", "SNR vs bearing with a field-of-view readout");
    double swa_from = -40.0, swa_to = 40.0, swa_step = 2.5, swa_range = 6.0, swa_q = 0.0,
           swa_noise = 1e-4;
    int swa_seeds = 10;
    std::string swa_csv;
    bool swa_fov55 = false;
    swa->add_option("--from", swa_from)->capture_default_str();
    swa->add_option("--to", swa_to)->capture_default_str();
    swa->add_option("--step", swa_step)->capture_default_str();
    swa->add_option("--seeds", swa_seeds)->capture_default_str();
    swa->add_option("--range", swa_range, "target range, m")->capture_default_str();
    swa->add_option("--taper-q", swa_q, "element cos^q amplitude taper")->capture_default_str();
    swa->add_flag("--taper-fov55", swa_fov55, "calibrate the taper for a 55 deg 3 dB FoV");
    swa->add_option("--noise", swa_noise, "noise power")->capture_default_str();
    swa->add_option("--out", swa_csv, "CSV output path");

    // two-target
    auto* twot = app.add_subcommand("two-target", "background capture plus two-reflector imaging");
    std::string twot_img = "two_target.csv", twot_det = "two_target.jsonl";
    double twot_range = 6.0, twot_angle = 10.0;
    twot->add_option("--out-image", twot_img)->capture_default_str();
    twot->add_option("--detections", twot_det)->capture_default_str();
    twot->add_option("--range", twot_range, "target range, m")->capture_default_str();
    twot->add_option("--angle", twot_angle, "target bearing magnitude, deg")->capture_default_str();

    // emit-config / emit-scene
    auto* emitc = app.add_subcommand("emit-config", "write the default config document");
    std::string emitc_path = "jrc_config.json";
    emitc->add_option("path", emitc_path)->capture_default_str();
    auto* emits = app.add_subcommand("emit-scene", "write an example scene document");
    std::string emits_path = "jrc_scene.json";
    emits->add_option("path", emits_path)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*tx)
            return cmd_tx(common, tx_out, tx_kind, tx_mcs, tx_payload_size, tx_payload_file,
                          tx_frames, tx_feedback, tx_listen, tx_listen_secs);
        if (*sim)
            return cmd_simulate(common, sim_scene, sim_in, sim_out, sim_mode, sim_distance,
                                sim_angle);
        if (*radar)
            return cmd_radar(common, radar_tx, radar_rx, radar_img, radar_det, radar_si,
                             radar_peak, radar_pfa);
        if (*sicap)
            return cmd_si_capture(common, si_tx, si_rx, si_win, si_out);
        if (*rx)
            return cmd_rx(common, rx_in, rx_out, rx_feedback, rx_estimator);
        if (*loop)
            return cmd_loopback(common, loop_frames, loop_payload, loop_mcs, loop_snr, loop_cfo,
                                loop_distance, loop_angle, loop_si_win);
        if (*swd)
            return cmd_sweep_distance(common, swd_from, swd_to, swd_step, swd_seeds, swd_mode,
                                      swd_exp, swd_noise, swd_d0, swd_csv);
        if (*swa) {
            if (swa_fov55)
                swa_q = std::log(std::pow(10.0, -3.0 / 20.0))
                    / std::log(std::cos(27.5 * M_PI / 180.0));
            return cmd_sweep_angle(common, swa_from, swa_to, swa_step, swa_seeds, swa_range,
                                   swa_q, swa_noise, swa_csv);
        }
        if (*twot)
            return cmd_two_target(common, twot_img, twot_det, twot_range, twot_angle);
        if (*emitc)
            return cmd_emit_config(emitc_path);
        if (*emits)
            return cmd_emit_scene(emits_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
