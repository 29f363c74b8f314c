// AVX2 variants of the vector kernels. Two complex<double> lanes per
// __m256d register, scalar tail loop for odd lengths. Compiled with
// -mavx2 -mfma; only dispatched when the CPU reports support.

#include "jrc/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace jrc::kernels {

namespace {

// [a0*b0, a1*b1] for packed complex doubles
inline __m256d cmul_pd(__m256d a, __m256d b)
{
    __m256d b_re = _mm256_movedup_pd(b);
    __m256d b_im = _mm256_permute_pd(b, 0xF);
    __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

// [a0*conj(b0), a1*conj(b1)]
inline __m256d cmul_conj_pd(__m256d a, __m256d b)
{
    __m256d b_re = _mm256_movedup_pd(b);
    __m256d b_im = _mm256_permute_pd(b, 0xF);
    __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmsubadd_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline __m256d broadcast_c(cplx s)
{
    return _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
}

// renormalize both complex lanes to the given magnitude
inline __m256d renorm_pd(__m256d r, double target_mag)
{
    __m256d sq = _mm256_mul_pd(r, r);
    __m256d mag2 = _mm256_hadd_pd(sq, sq); // [m0,m0,m1,m1]
    __m256d inv = _mm256_div_pd(_mm256_set1_pd(target_mag), _mm256_sqrt_pd(mag2));
    return _mm256_mul_pd(r, inv);
}

void v_cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
        __m256d vb = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
        _mm256_storeu_pd(reinterpret_cast<double*>(out + i), cmul_pd(va, vb));
    }
    for (; i < n; ++i)
        out[i] = a[i] * b[i];
}

void v_cmul_conj(const cplx* a, const cplx* b, cplx* out, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
        __m256d vb = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
        _mm256_storeu_pd(reinterpret_cast<double*>(out + i), cmul_conj_pd(va, vb));
    }
    for (; i < n; ++i)
        out[i] = a[i] * std::conj(b[i]);
}

void v_cmadd(cplx* acc, const cplx* a, cplx s, std::size_t n)
{
    __m256d vs = broadcast_c(s);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
        __m256d vacc = _mm256_loadu_pd(reinterpret_cast<double*>(acc + i));
        vacc = _mm256_add_pd(vacc, cmul_pd(va, vs));
        _mm256_storeu_pd(reinterpret_cast<double*>(acc + i), vacc);
    }
    for (; i < n; ++i)
        acc[i] += s * a[i];
}

void v_cmadd_ramp(cplx* acc, const cplx* a, cplx s, cplx step, std::size_t n)
{
    __m256d vs = broadcast_c(s);
    __m256d vr = _mm256_setr_pd(1.0, 0.0, step.real(), step.imag()); // [r_0, r_1]
    cplx step2 = step * step;
    __m256d vstep2 = broadcast_c(step2);
    std::size_t i = 0;
    std::size_t since_renorm = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
        __m256d vacc = _mm256_loadu_pd(reinterpret_cast<double*>(acc + i));
        __m256d coeff = cmul_pd(vr, vs);
        vacc = _mm256_add_pd(vacc, cmul_pd(coeff, va));
        _mm256_storeu_pd(reinterpret_cast<double*>(acc + i), vacc);
        vr = cmul_pd(vr, vstep2);
        since_renorm += 2;
        if (since_renorm >= detail::kRotorRenorm) {
            vr = renorm_pd(vr, 1.0);
            since_renorm = 0;
        }
    }
    if (i < n) {
        alignas(32) double tail[4];
        _mm256_store_pd(tail, vr);
        cplx r(tail[0], tail[1]);
        acc[i] += s * r * a[i];
    }
}

void v_rotate(cplx* a, cplx r0, cplx step, std::size_t n)
{
    double mag0 = std::abs(r0);
    cplx r1 = r0 * step;
    __m256d vr = _mm256_setr_pd(r0.real(), r0.imag(), r1.real(), r1.imag());
    __m256d vstep2 = broadcast_c(step * step);
    std::size_t i = 0;
    std::size_t since_renorm = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(reinterpret_cast<double*>(a + i));
        _mm256_storeu_pd(reinterpret_cast<double*>(a + i), cmul_pd(va, vr));
        vr = cmul_pd(vr, vstep2);
        since_renorm += 2;
        if (since_renorm >= detail::kRotorRenorm) {
            vr = renorm_pd(vr, mag0);
            since_renorm = 0;
        }
    }
    if (i < n) {
        alignas(32) double tail[4];
        _mm256_store_pd(tail, vr);
        a[i] *= cplx(tail[0], tail[1]);
    }
}

void v_mul_real(const cplx* a, const double* w, cplx* out, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
        __m128d wlo = _mm_loadu_pd(w + i);
        __m256d vw = _mm256_permute4x64_pd(_mm256_castpd128_pd256(wlo), 0x50); // [w0,w0,w1,w1]
        _mm256_storeu_pd(reinterpret_cast<double*>(out + i), _mm256_mul_pd(va, vw));
    }
    for (; i < n; ++i)
        out[i] = a[i] * w[i];
}

void v_power(const cplx* a, double* out, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
        __m256d sq = _mm256_mul_pd(va, va);
        __m256d h = _mm256_hadd_pd(sq, sq); // [n0,n0,n1,n1]
        __m128d lo = _mm256_castpd256_pd128(h);
        __m128d hi = _mm256_extractf128_pd(h, 1);
        _mm_storeu_pd(out + i, _mm_shuffle_pd(lo, hi, 0));
    }
    for (; i < n; ++i)
        out[i] = std::norm(a[i]);
}

double v_energy(const cplx* a, std::size_t n)
{
    __m256d vacc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
        vacc = _mm256_fmadd_pd(va, va, vacc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vacc);
    double e = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i)
        e += std::norm(a[i]);
    return e;
}

cplx v_dot_conj(const cplx* a, const cplx* b, std::size_t n)
{
    __m256d vacc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
        __m256d vb = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
        vacc = _mm256_add_pd(vacc, cmul_conj_pd(va, vb));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vacc);
    cplx acc(lanes[0] + lanes[2], lanes[1] + lanes[3]);
    for (; i < n; ++i)
        acc += a[i] * std::conj(b[i]);
    return acc;
}

void v_scale(cplx* a, double s, std::size_t n)
{
    __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(reinterpret_cast<double*>(a + i));
        _mm256_storeu_pd(reinterpret_cast<double*>(a + i), _mm256_mul_pd(va, vs));
    }
    for (; i < n; ++i)
        a[i] *= s;
}

} // namespace

namespace detail {

const Ops* avx2_ops_or_null()
{
    static const Ops ops{
        "avx2",
        v_cmul, v_cmul_conj, v_cmadd, v_cmadd_ramp, v_rotate,
        v_mul_real, v_power, v_energy, v_dot_conj, v_scale,
    };
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return &ops;
    return nullptr;
}

} // namespace detail

} // namespace jrc::kernels
