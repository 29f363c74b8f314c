#include "jrc/kernels.hpp"

#include <cmath>

namespace jrc::kernels {

namespace {

void s_cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a[i] * b[i];
}

void s_cmul_conj(const cplx* a, const cplx* b, cplx* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a[i] * std::conj(b[i]);
}

void s_cmadd(cplx* acc, const cplx* a, cplx s, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        acc[i] += s * a[i];
}

inline cplx renormalized(cplx r)
{
    return r / std::abs(r);
}

void s_cmadd_ramp(cplx* acc, const cplx* a, cplx s, cplx step, std::size_t n)
{
    cplx r(1.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        acc[i] += s * r * a[i];
        r *= step;
        if ((i + 1) % detail::kRotorRenorm == 0)
            r = renormalized(r);
    }
}

void s_rotate(cplx* a, cplx r0, cplx step, std::size_t n)
{
    cplx r = r0;
    for (std::size_t i = 0; i < n; ++i) {
        a[i] *= r;
        r *= step;
        if ((i + 1) % detail::kRotorRenorm == 0)
            r = renormalized(r) * std::abs(r0);
    }
}

void s_mul_real(const cplx* a, const double* w, cplx* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a[i] * w[i];
}

void s_power(const cplx* a, double* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::norm(a[i]);
}

double s_energy(const cplx* a, std::size_t n)
{
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        e += std::norm(a[i]);
    return e;
}

cplx s_dot_conj(const cplx* a, const cplx* b, std::size_t n)
{
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        acc += a[i] * std::conj(b[i]);
    return acc;
}

void s_scale(cplx* a, double s, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        a[i] *= s;
}

} // namespace

const Ops& scalar()
{
    static const Ops ops{
        "scalar",
        s_cmul, s_cmul_conj, s_cmadd, s_cmadd_ramp, s_rotate,
        s_mul_real, s_power, s_energy, s_dot_conj, s_scale,
    };
    return ops;
}

} // namespace jrc::kernels
