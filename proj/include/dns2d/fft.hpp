#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "dns2d/grid.hpp"

namespace dns2d {

/// Complex-to-complex 2D transforms for one lattice size.
///
/// Forward applies the 1/n^2 factor so that coefficients are the Fourier
/// series amplitudes of u(x) = sum_k u_hat(k) exp(i k.x). Plans are created
/// with FFTW_ESTIMATE | FFTW_UNALIGNED: deterministic planning and valid
/// execution on any caller buffer. FFTW planning is not thread safe, so plan
/// creation is serialized; execution on distinct buffers is concurrent-safe.
class Fft {
  public:
    explicit Fft(int n) : n_(n) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        std::vector<std::complex<double>> probe(static_cast<std::size_t>(n) * n);
        auto* p = reinterpret_cast<fftw_complex*>(probe.data());
        forward_ = fftw_plan_dft_2d(n, n, p, p, FFTW_FORWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        inverse_ = fftw_plan_dft_2d(n, n, p, p, FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
    }

    ~Fft() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(inverse_);
    }

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    /// In-place physical -> spectral, normalized by 1/n^2.
    void forward(std::complex<double>* data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(forward_, p, p);
        const double scale = 1.0 / (static_cast<double>(n_) * n_);
        const std::size_t total = static_cast<std::size_t>(n_) * n_;
        for (std::size_t i = 0; i < total; ++i) data[i] *= scale;
    }

    /// In-place spectral -> physical (no extra scaling).
    void inverse(std::complex<double>* data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(inverse_, p, p);
    }

    int n() const { return n_; }

    /// Shared per-size instance.
    static const Fft& of(int n) {
        static std::mutex m;
        static std::map<int, std::unique_ptr<Fft>> cache;
        std::lock_guard<std::mutex> lock(m);
        auto it = cache.find(n);
        if (it == cache.end())
            it = cache.emplace(n, std::make_unique<Fft>(n)).first;
        return *it->second;
    }

  private:
    static std::mutex& planner_mutex() {
        static std::mutex m;
        return m;
    }

    int n_;
    fftw_plan forward_;
    fftw_plan inverse_;
};

}  // namespace dns2d
