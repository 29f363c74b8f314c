#include "jrc/io_formats.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace jrc::io {

using nlohmann::json;

namespace {

void atomic_write_text(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot open for writing: " + tmp);
        os << content;
        os.flush();
        if (!os)
            throw std::runtime_error("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw std::runtime_error("rename failed for " + path + ": " + ec.message());
}

json complex_to_json(const cplx& c)
{
    return json::array({ c.real(), c.imag() });
}

cplx complex_from_json(const json& j)
{
    return { j.at(0).get<double>(), j.at(1).get<double>() };
}

} // namespace

void write_iq(const std::string& path, const std::vector<cplx>& samples, const IqMeta& meta)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot open IQ file for writing: " + path);
    std::vector<float> buf(samples.size() * 2);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        buf[2 * i] = static_cast<float>(samples[i].real());
        buf[2 * i + 1] = static_cast<float>(samples[i].imag());
    }
    os.write(reinterpret_cast<const char*>(buf.data()),
             static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!os)
        throw std::runtime_error("IQ write failed: " + path);

    json j;
    j["format"] = "jrc-iq";
    j["version"] = 1;
    j["sample_rate"] = meta.sample_rate;
    j["carrier_hz"] = meta.carrier_hz;
    j["chain_id"] = meta.chain_id;
    j["frame_markers"] = meta.frame_markers;
    j["sample_count"] = samples.size();
    atomic_write_text(path + ".json", j.dump(2) + "\n");
}

std::vector<cplx> read_iq(const std::string& path, IqMeta* meta)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open IQ file: " + path);
    is.seekg(0, std::ios::end);
    const std::streamoff bytes = is.tellg();
    is.seekg(0, std::ios::beg);
    if (bytes < 0 || bytes % 8 != 0)
        throw std::runtime_error("malformed IQ file (byte length not divisible by 8): " + path);
    const std::size_t n = static_cast<std::size_t>(bytes) / 8;
    std::vector<float> buf(n * 2);
    is.read(reinterpret_cast<char*>(buf.data()), bytes);
    if (!is)
        throw std::runtime_error("IQ read failed: " + path);
    std::vector<cplx> samples(n);
    for (std::size_t i = 0; i < n; ++i)
        samples[i] = cplx(buf[2 * i], buf[2 * i + 1]);

    const std::string side = path + ".json";
    if (std::filesystem::exists(side)) {
        std::ifstream ms(side);
        json j = json::parse(ms);
        if (j.value("format", "") != "jrc-iq")
            throw std::runtime_error("sidecar format mismatch: " + side);
        if (j.value("sample_count", static_cast<uint64_t>(n)) != n)
            throw std::runtime_error("sidecar sample count disagrees with IQ file: " + path);
        if (meta) {
            meta->sample_rate = j.value("sample_rate", 0.0);
            meta->carrier_hz = j.value("carrier_hz", 0.0);
            meta->chain_id = j.value("chain_id", 0);
            meta->frame_markers = j.value("frame_markers", std::vector<uint64_t>{});
            meta->sample_count = n;
        }
    } else if (meta) {
        *meta = IqMeta{};
        meta->sample_count = n;
    }
    return samples;
}

namespace {

std::string matrix_document(const std::string& magic, int n_sc, int n_cols,
                            const std::vector<int>& occupied, const std::vector<cplx>& h)
{
    std::ostringstream os;
    os.precision(17);
    os << magic << " v1\n";
    os << "timestamp "
       << std::chrono::duration_cast<std::chrono::seconds>(
              std::chrono::system_clock::now().time_since_epoch())
              .count()
       << "\n";
    os << "n_sc " << n_sc << "\n";
    os << "n_cols " << n_cols << "\n";
    os << "occupied";
    for (int n : occupied)
        os << ' ' << n;
    os << "\n";
    for (int n : occupied) {
        os << n << ":";
        for (int c = 0; c < n_cols; ++c) {
            const cplx& v = h[static_cast<std::size_t>(n) * n_cols + c];
            os << " (" << v.real() << "," << v.imag() << ");";
        }
        os << "\n";
    }
    return os.str();
}

struct MatrixDoc {
    int n_sc = 0;
    int n_cols = 0;
    std::vector<int> occupied;
    std::vector<cplx> h;
};

MatrixDoc parse_matrix_document(const std::string& path, const std::string& magic)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open: " + path);
    std::string line, word;
    if (!std::getline(is, line) || line.rfind(magic + " v1", 0) != 0)
        throw std::runtime_error("bad magic in " + path);
    MatrixDoc doc;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        if (line.rfind("timestamp", 0) == 0)
            continue;
        if (line.rfind("n_sc", 0) == 0) {
            ls >> word >> doc.n_sc;
            continue;
        }
        if (line.rfind("n_cols", 0) == 0) {
            ls >> word >> doc.n_cols;
            continue;
        }
        if (line.rfind("occupied", 0) == 0) {
            ls >> word;
            int idx;
            while (ls >> idx)
                doc.occupied.push_back(idx);
            if (doc.n_sc <= 0 || doc.n_cols <= 0)
                throw std::runtime_error("matrix header incomplete in " + path);
            doc.h.assign(static_cast<std::size_t>(doc.n_sc) * doc.n_cols, cplx(0.0, 0.0));
            continue;
        }
        // "<sc>: (re,im);(re,im);..."
        int sc = 0;
        char colon = 0;
        ls >> sc >> colon;
        if (colon != ':' || sc < 0 || sc >= doc.n_sc)
            throw std::runtime_error("malformed row in " + path + ": " + line);
        std::string entry;
        int col = 0;
        while (std::getline(ls, entry, ';') && col < doc.n_cols) {
            double re = 0, im = 0;
            if (std::sscanf(entry.c_str(), " (%lf,%lf)", &re, &im) != 2) {
                if (entry.find_first_not_of(" \t\r") == std::string::npos)
                    break;
                throw std::runtime_error("malformed entry in " + path + ": " + entry);
            }
            doc.h[static_cast<std::size_t>(sc) * doc.n_cols + col] = cplx(re, im);
            ++col;
        }
        if (col != doc.n_cols)
            throw std::runtime_error("row with wrong column count in " + path);
    }
    return doc;
}

} // namespace

void write_feedback(const std::string& path, const std::vector<cplx>& h_sc_by_tx,
                    const SystemConfig& cfg)
{
    if (h_sc_by_tx.size() != static_cast<std::size_t>(cfg.n_subcarriers) * cfg.n_tx)
        throw std::invalid_argument("write_feedback: matrix size mismatch");
    atomic_write_text(path, matrix_document("jrc-feedback", cfg.n_subcarriers, cfg.n_tx,
                                            cfg.occupied_carriers(), h_sc_by_tx));
}

std::vector<cplx> read_feedback(const std::string& path, const SystemConfig& cfg)
{
    MatrixDoc doc = parse_matrix_document(path, "jrc-feedback");
    if (doc.n_sc != cfg.n_subcarriers || doc.n_cols != cfg.n_tx)
        throw std::runtime_error("feedback dimensions do not match config: " + path);
    return doc.h;
}

void write_si_state(const std::string& path, const MeasurementMatrix& m)
{
    std::vector<int> rows;
    rows.reserve(m.n_sc);
    for (int n = 0; n < m.n_sc; ++n)
        rows.push_back(n);
    atomic_write_text(path, matrix_document("jrc-si", m.n_sc, m.n_virt, rows, m.h));
}

MeasurementMatrix read_si_state(const std::string& path)
{
    MatrixDoc doc = parse_matrix_document(path, "jrc-si");
    MeasurementMatrix m(doc.n_sc, doc.n_cols);
    m.h = doc.h;
    return m;
}

void write_image(const std::string& path, const RangeAngleImage& img)
{
    std::ostringstream os;
    os.precision(10);
    os << "range_m\\angle_deg";
    for (int a = 0; a < img.n_angle; ++a)
        os << ',' << img.axes.angle_deg[a];
    os << '\n';
    for (int r = 0; r < img.n_range; ++r) {
        os << img.axes.range_m[r];
        for (int a = 0; a < img.n_angle; ++a)
            os << ',' << 10.0 * std::log10(std::max(img.at(r, a), 1e-30));
        os << '\n';
    }
    atomic_write_text(path, os.str());
}

void append_detections(const std::string& path, uint64_t frame, const std::vector<Detection>& dets)
{
    std::ofstream os(path, std::ios::app);
    if (!os)
        throw std::runtime_error("cannot open detection log: " + path);
    for (const auto& d : dets) {
        json j;
        j["frame"] = frame;
        j["range_m"] = d.range_m;
        j["angle_deg"] = d.angle_deg;
        j["snr_db"] = d.snr_db;
        os << j.dump() << '\n';
    }
}

void save_config(const std::string& path, const SystemConfig& cfg)
{
    json j;
    j["format"] = "jrc-config";
    j["version"] = 1;
    j["carrier_hz"] = cfg.carrier_hz;
    j["bandwidth_hz"] = cfg.bandwidth_hz;
    j["n_subcarriers"] = cfg.n_subcarriers;
    j["cyclic_prefix"] = cfg.cyclic_prefix;
    j["n_tx"] = cfg.n_tx;
    j["n_rx"] = cfg.n_rx;
    j["tx_spacing_m"] = cfg.tx_spacing_m;
    j["rx_spacing_m"] = cfg.rx_spacing_m;
    j["data_carriers"] = cfg.data_carriers;
    j["pilot_carriers"] = cfg.pilot_carriers;
    j["guard_carriers"] = cfg.guard_carriers;
    json pv = json::array();
    for (const auto& v : cfg.pilot_values)
        pv.push_back(complex_to_json(v));
    j["pilot_values"] = pv;
    j["range_fft_size"] = cfg.range_fft_size;
    j["angle_fft_size"] = cfg.angle_fft_size;
    j["range_window"] = to_string(cfg.range_window);
    j["angle_window"] = to_string(cfg.angle_window);
    atomic_write_text(path, j.dump(2) + "\n");
}

SystemConfig load_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open config: " + path);
    json j = json::parse(is);
    if (j.value("format", "") != "jrc-config")
        throw std::runtime_error("not a jrc-config document: " + path);
    SystemConfig cfg;
    cfg.carrier_hz = j.at("carrier_hz").get<double>();
    cfg.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    cfg.n_subcarriers = j.at("n_subcarriers").get<int>();
    cfg.cyclic_prefix = j.at("cyclic_prefix").get<int>();
    cfg.n_tx = j.at("n_tx").get<int>();
    cfg.n_rx = j.at("n_rx").get<int>();
    cfg.tx_spacing_m = j.at("tx_spacing_m").get<double>();
    cfg.rx_spacing_m = j.at("rx_spacing_m").get<double>();
    cfg.data_carriers = j.at("data_carriers").get<std::vector<int>>();
    cfg.pilot_carriers = j.at("pilot_carriers").get<std::vector<int>>();
    cfg.guard_carriers = j.at("guard_carriers").get<std::vector<int>>();
    cfg.pilot_values.clear();
    for (const auto& v : j.at("pilot_values"))
        cfg.pilot_values.push_back(complex_from_json(v));
    cfg.range_fft_size = j.at("range_fft_size").get<int>();
    cfg.angle_fft_size = j.at("angle_fft_size").get<int>();
    cfg.range_window = window_from_string(j.value("range_window", "rect"));
    cfg.angle_window = window_from_string(j.value("angle_window", "rect"));
    require_valid(cfg);
    return cfg;
}

SystemConfig load_config_or_defaults(const std::string& path_or_keyword)
{
    if (path_or_keyword.empty() || path_or_keyword == "defaults"
        || path_or_keyword == "paper-defaults")
        return SystemConfig::defaults();
    return load_config(path_or_keyword);
}

void save_scene(const std::string& path, const Scene& scene)
{
    json j;
    j["format"] = "jrc-scene";
    j["version"] = 1;
    auto targets_json = [](const std::vector<PointTarget>& v) {
        json arr = json::array();
        for (const auto& t : v) {
            json e;
            e["range_m"] = t.range_m;
            e["angle_deg"] = t.angle_deg;
            e["reflectivity"] = t.reflectivity;
            e["velocity_mps"] = t.velocity_mps;
            arr.push_back(e);
        }
        return arr;
    };
    j["targets"] = targets_json(scene.targets);
    j["clutter"] = targets_json(scene.clutter);
    j["si_amplitude"] = scene.si.amplitude;
    j["si_delay_s"] = scene.si.delay_s;
    j["noise_power"] = scene.noise_power;
    j["radar_pl_exponent"] = scene.radar_pl_exponent;
    j["comm_pl_exponent"] = scene.comm_pl_exponent;
    j["element_taper_q"] = scene.element_taper_q;
    j["cfo_hz"] = scene.cfo_hz;
    j["rng_seed"] = scene.rng_seed;
    atomic_write_text(path, j.dump(2) + "\n");
}

Scene load_scene(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open scene: " + path);
    json j = json::parse(is);
    if (j.value("format", "") != "jrc-scene")
        throw std::runtime_error("not a jrc-scene document: " + path);
    Scene s;
    auto targets_from = [](const json& arr) {
        std::vector<PointTarget> v;
        for (const auto& e : arr) {
            PointTarget t;
            t.range_m = e.at("range_m").get<double>();
            t.angle_deg = e.at("angle_deg").get<double>();
            t.reflectivity = e.value("reflectivity", 1.0);
            t.velocity_mps = e.value("velocity_mps", 0.0);
            v.push_back(t);
        }
        return v;
    };
    s.targets = targets_from(j.value("targets", json::array()));
    s.clutter = targets_from(j.value("clutter", json::array()));
    s.si.amplitude = j.value("si_amplitude", 0.0);
    s.si.delay_s = j.value("si_delay_s", 0.0);
    s.noise_power = j.value("noise_power", 0.0);
    s.radar_pl_exponent = j.value("radar_pl_exponent", 4.0);
    s.comm_pl_exponent = j.value("comm_pl_exponent", 2.0);
    s.element_taper_q = j.value("element_taper_q", 0.0);
    s.cfo_hz = j.value("cfo_hz", 0.0);
    s.rng_seed = j.value("rng_seed", static_cast<uint64_t>(1));
    return s;
}

} // namespace jrc::io
