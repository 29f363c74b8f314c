#ifndef JRC_FFT_HPP
#define JRC_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace jrc {

/// Out-of-place complex FFT of a fixed size, both directions.
/// forward() computes X[k] = sum_n x[n] e^{-j2πnk/N} (unnormalized);
/// inverse() the conjugate transform, also unnormalized. The *_unitary
/// variants scale by 1/sqrt(N) so a round trip has gain exactly 1.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    Fft(Fft&& other) noexcept;
    Fft& operator=(Fft&& other) noexcept;

    std::size_t size() const { return n_; }

    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    void inverse(const std::complex<double>* in, std::complex<double>* out) const;
    void forward_unitary(const std::complex<double>* in, std::complex<double>* out) const;
    void inverse_unitary(const std::complex<double>* in, std::complex<double>* out) const;

    std::vector<std::complex<double>> forward_unitary(const std::vector<std::complex<double>>& in) const;
    std::vector<std::complex<double>> inverse_unitary(const std::vector<std::complex<double>>& in) const;

private:
    std::size_t n_;
    void* plan_fwd_; // fftw_plan
    void* plan_inv_;
};

} // namespace jrc

#endif
