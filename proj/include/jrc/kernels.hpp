#ifndef JRC_KERNELS_HPP
#define JRC_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <string>

namespace jrc::kernels {

using cplx = std::complex<double>;

/// Vector kernels used by the baseband inner loops. Every operation exists as
/// a portable scalar reference and, where the host CPU supports it, an AVX2
/// variant. The active backend is chosen once at startup; set_backend() can
/// pin a specific one (tests compare backends against each other).
struct Ops {
    const char* name;

    // out[i] = a[i] * b[i]
    void (*cmul)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
    // out[i] = a[i] * conj(b[i])
    void (*cmul_conj)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
    // acc[i] += s * a[i]
    void (*cmadd)(cplx* acc, const cplx* a, cplx s, std::size_t n);
    // acc[i] += s * r_i * a[i]  with  r_0 = 1, r_{i+1} = r_i * step
    // (step is expected to be unit modulus; the rotor is renormalized
    //  periodically so long ramps stay on the unit circle)
    void (*cmadd_ramp)(cplx* acc, const cplx* a, cplx s, cplx step, std::size_t n);
    // a[i] *= r0 * step^i  (same rotor recurrence as cmadd_ramp)
    void (*rotate)(cplx* a, cplx r0, cplx step, std::size_t n);
    // out[i] = a[i] * w[i]
    void (*mul_real)(const cplx* a, const double* w, cplx* out, std::size_t n);
    // out[i] = |a[i]|^2
    void (*power)(const cplx* a, double* out, std::size_t n);
    // sum |a[i]|^2
    double (*energy)(const cplx* a, std::size_t n);
    // sum a[i] * conj(b[i])
    cplx (*dot_conj)(const cplx* a, const cplx* b, std::size_t n);
    // a[i] *= s
    void (*scale)(cplx* a, double s, std::size_t n);
};

/// Portable reference backend.
const Ops& scalar();

/// Backend selected for this process ("scalar" or "avx2").
const Ops& active();

const char* backend_name();

/// Force a backend by name: "scalar", "avx2", or "auto" to re-detect.
/// Throws std::invalid_argument for unknown or unsupported names.
void set_backend(const std::string& name);

/// True if the AVX2 variant was compiled in and the CPU supports it.
bool avx2_available();

// Convenience forwarders over the active backend.
inline void cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n) { active().cmul(a, b, out, n); }
inline void cmul_conj(const cplx* a, const cplx* b, cplx* out, std::size_t n) { active().cmul_conj(a, b, out, n); }
inline void cmadd(cplx* acc, const cplx* a, cplx s, std::size_t n) { active().cmadd(acc, a, s, n); }
inline void cmadd_ramp(cplx* acc, const cplx* a, cplx s, cplx step, std::size_t n) { active().cmadd_ramp(acc, a, s, step, n); }
inline void rotate(cplx* a, cplx r0, cplx step, std::size_t n) { active().rotate(a, r0, step, n); }
inline void mul_real(const cplx* a, const double* w, cplx* out, std::size_t n) { active().mul_real(a, w, out, n); }
inline void power(const cplx* a, double* out, std::size_t n) { active().power(a, out, n); }
inline double energy(const cplx* a, std::size_t n) { return active().energy(a, n); }
inline cplx dot_conj(const cplx* a, const cplx* b, std::size_t n) { return active().dot_conj(a, b, n); }
inline void scale(cplx* a, double s, std::size_t n) { active().scale(a, s, n); }

namespace detail {
// Rotor renormalization stride shared by scalar and SIMD variants so both
// follow the same recurrence.
inline constexpr std::size_t kRotorRenorm = 256;
const Ops* avx2_ops_or_null();
}

} // namespace jrc::kernels

#endif
