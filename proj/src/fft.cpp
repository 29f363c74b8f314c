#include "jrc/fft.hpp"
#include "jrc/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include <fftw3.h>

namespace jrc {

// Plans are created with FFTW_ESTIMATE so planning is deterministic and cheap;
// FFTW_UNALIGNED lets the same plan run on arbitrary caller buffers via the
// new-array execute interface.
Fft::Fft(std::size_t n)
    : n_(n), plan_fwd_(nullptr), plan_inv_(nullptr)
{
    if (n == 0)
        throw std::invalid_argument("Fft: size must be positive");
    std::vector<std::complex<double>> a(n), b(n);
    auto* ap = reinterpret_cast<fftw_complex*>(a.data());
    auto* bp = reinterpret_cast<fftw_complex*>(b.data());
    plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(n), ap, bp, FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_inv_ = fftw_plan_dft_1d(static_cast<int>(n), ap, bp, FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_fwd_ || !plan_inv_)
        throw std::runtime_error("Fft: fftw plan creation failed");
}

Fft::~Fft()
{
    if (plan_fwd_)
        fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_inv_)
        fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

Fft::Fft(Fft&& other) noexcept
    : n_(other.n_), plan_fwd_(other.plan_fwd_), plan_inv_(other.plan_inv_)
{
    other.plan_fwd_ = nullptr;
    other.plan_inv_ = nullptr;
}

Fft& Fft::operator=(Fft&& other) noexcept
{
    if (this != &other) {
        if (plan_fwd_)
            fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
        if (plan_inv_)
            fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
        n_ = other.n_;
        plan_fwd_ = other.plan_fwd_;
        plan_inv_ = other.plan_inv_;
        other.plan_fwd_ = nullptr;
        other.plan_inv_ = nullptr;
    }
    return *this;
}

void Fft::forward(const std::complex<double>* in, std::complex<double>* out) const
{
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void Fft::inverse(const std::complex<double>* in, std::complex<double>* out) const
{
    fftw_execute_dft(static_cast<fftw_plan>(plan_inv_),
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void Fft::forward_unitary(const std::complex<double>* in, std::complex<double>* out) const
{
    forward(in, out);
    kernels::scale(out, 1.0 / std::sqrt(static_cast<double>(n_)), n_);
}

void Fft::inverse_unitary(const std::complex<double>* in, std::complex<double>* out) const
{
    inverse(in, out);
    kernels::scale(out, 1.0 / std::sqrt(static_cast<double>(n_)), n_);
}

std::vector<std::complex<double>> Fft::forward_unitary(const std::vector<std::complex<double>>& in) const
{
    if (in.size() != n_)
        throw std::invalid_argument("Fft: input size mismatch");
    std::vector<std::complex<double>> out(n_);
    forward_unitary(in.data(), out.data());
    return out;
}

std::vector<std::complex<double>> Fft::inverse_unitary(const std::vector<std::complex<double>>& in) const
{
    if (in.size() != n_)
        throw std::invalid_argument("Fft: input size mismatch");
    std::vector<std::complex<double>> out(n_);
    inverse_unitary(in.data(), out.data());
    return out;
}

} // namespace jrc
