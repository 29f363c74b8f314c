#ifndef JRC_IO_FORMATS_HPP
#define JRC_IO_FORMATS_HPP

#include "jrc/channel_sim.hpp"
#include "jrc/config.hpp"
#include "jrc/radar.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace jrc::io {

/// Sidecar metadata stored as <iq path>.json next to each IQ file.
struct IqMeta {
    double sample_rate = 0;
    double carrier_hz = 0;
    int chain_id = 0;
    std::vector<uint64_t> frame_markers;
    uint64_t sample_count = 0;
};

/// Header-less little-endian float32 (I, Q) pairs plus the sidecar.
void write_iq(const std::string& path, const std::vector<cplx>& samples, const IqMeta& meta);
std::vector<cplx> read_iq(const std::string& path, IqMeta* meta = nullptr);

/// Channel feedback, text format, atomic write-then-rename:
///   jrc-feedback v1 / timestamp / n_sc / n_tx / occupied indices, then one
///   "<sc>: (re,im);(re,im);..." line per occupied subcarrier.
void write_feedback(const std::string& path, const std::vector<cplx>& h_sc_by_tx,
                    const SystemConfig& cfg);
std::vector<cplx> read_feedback(const std::string& path, const SystemConfig& cfg);

/// Frozen background estimate for the radar path, same container with a
/// jrc-si magic and n_virt columns.
void write_si_state(const std::string& path, const MeasurementMatrix& m);
MeasurementMatrix read_si_state(const std::string& path);

/// Delimited-text heatmap: first row the angle axis (deg), first column
/// the range axis (m), body in dB.
void write_image(const std::string& path, const RangeAngleImage& img);

/// Line-delimited detection records {frame, range_m, angle_deg, snr_db}.
void append_detections(const std::string& path, uint64_t frame, const std::vector<Detection>& dets);

// config / scene documents (JSON)
void save_config(const std::string& path, const SystemConfig& cfg);
SystemConfig load_config(const std::string& path);
/// "defaults" (or a missing extension match) falls back to SystemConfig::defaults().
SystemConfig load_config_or_defaults(const std::string& path_or_keyword);

void save_scene(const std::string& path, const Scene& scene);
Scene load_scene(const std::string& path);

} // namespace jrc::io

#endif
