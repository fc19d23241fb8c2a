#pragma once

#include <complex>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dns2d/grid.hpp"

namespace dns2d {

using Complex = std::complex<double>;

/// Real scalar field on the torus, stored as Fourier coefficients.
class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(GridPtr grid)
        : grid_(std::move(grid)), coeff_(grid_->size(), Complex{}) {}
    ScalarField(GridPtr grid, std::vector<Complex> coeff)
        : grid_(std::move(grid)), coeff_(std::move(coeff)) {
        if (coeff_.size() != grid_->size())
            throw std::invalid_argument("ScalarField: coefficient size mismatch");
    }

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    Complex& operator()(int i, int j) { return coeff_[grid_->index(i, j)]; }
    const Complex& operator()(int i, int j) const {
        return coeff_[grid_->index(i, j)];
    }
    std::vector<Complex>& coeff() { return coeff_; }
    const std::vector<Complex>& coeff() const { return coeff_; }

    /// Projects onto the conjugate-symmetric (real-valued) part.
    void symmetrize() {
        const int n = grid_->n();
        for (int i = 0; i < n; ++i) {
            const int ic = grid_->conj_index(i);
            for (int j = 0; j < n; ++j) {
                const int jc = grid_->conj_index(j);
                if (grid_->index(i, j) > grid_->index(ic, jc)) continue;
                const Complex a = coeff_[grid_->index(i, j)];
                const Complex b = std::conj(coeff_[grid_->index(ic, jc)]);
                const Complex avg = 0.5 * (a + b);
                coeff_[grid_->index(i, j)] = avg;
                coeff_[grid_->index(ic, jc)] = std::conj(avg);
            }
        }
    }

    /// Max |a(k) - conj(a(-k))| over the lattice.
    double reality_defect() const {
        const int n = grid_->n();
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            const int ic = grid_->conj_index(i);
            for (int j = 0; j < n; ++j) {
                const int jc = grid_->conj_index(j);
                const Complex d = coeff_[grid_->index(i, j)] -
                                  std::conj(coeff_[grid_->index(ic, jc)]);
                worst = std::max(worst, std::abs(d));
            }
        }
        return worst;
    }

  private:
    GridPtr grid_;
    std::vector<Complex> coeff_;
};

/// Real 2-component velocity-type field, stored as Fourier coefficients.
/// The divergence_free flag is a certificate set by the operations that
/// guarantee it (Leray projection, integrators, generators).
class VectorField {
  public:
    VectorField() = default;
    explicit VectorField(GridPtr grid)
        : grid_(std::move(grid)),
          comp_{std::vector<Complex>(grid_->size(), Complex{}),
                std::vector<Complex>(grid_->size(), Complex{})} {}

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }

    std::vector<Complex>& comp(int c) { return comp_[c]; }
    const std::vector<Complex>& comp(int c) const { return comp_[c]; }
    Complex& at(int c, int i, int j) { return comp_[c][grid_->index(i, j)]; }
    const Complex& at(int c, int i, int j) const {
        return comp_[c][grid_->index(i, j)];
    }

    bool divergence_free() const { return divergence_free_; }
    void set_divergence_free(bool v) { divergence_free_ = v; }

    void symmetrize() {
        for (int c = 0; c < 2; ++c) {
            ScalarField tmp(grid_, std::move(comp_[c]));
            tmp.symmetrize();
            comp_[c] = std::move(tmp.coeff());
        }
    }

    double reality_defect() const {
        double worst = 0.0;
        for (int c = 0; c < 2; ++c) {
            ScalarField tmp(grid_, comp_[c]);
            worst = std::max(worst, tmp.reality_defect());
        }
        return worst;
    }

    /// Max_k |k . u_hat(k)|.
    double divergence_defect() const {
        const int n = grid_->n();
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const std::size_t id = grid_->index(i, j);
                const Complex d = grid_->wavenumber(i) * comp_[0][id] +
                                  grid_->wavenumber(j) * comp_[1][id];
                worst = std::max(worst, std::abs(d));
            }
        }
        return worst;
    }

    Complex mean_mode(int c) const { return comp_[c][0]; }

    VectorField& operator+=(const VectorField& o) {
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < comp_[c].size(); ++i)
                comp_[c][i] += o.comp_[c][i];
        divergence_free_ = divergence_free_ && o.divergence_free_;
        return *this;
    }
    VectorField& operator-=(const VectorField& o) {
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < comp_[c].size(); ++i)
                comp_[c][i] -= o.comp_[c][i];
        divergence_free_ = divergence_free_ && o.divergence_free_;
        return *this;
    }
    VectorField& operator*=(double s) {
        for (int c = 0; c < 2; ++c)
            for (auto& v : comp_[c]) v *= s;
        return *this;
    }

    friend VectorField operator+(VectorField a, const VectorField& b) {
        a += b;
        return a;
    }
    friend VectorField operator-(VectorField a, const VectorField& b) {
        a -= b;
        return a;
    }
    friend VectorField operator*(double s, VectorField a) {
        a *= s;
        return a;
    }

    /// this += s * o
    void axpy(double s, const VectorField& o) {
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < comp_[c].size(); ++i)
                comp_[c][i] += s * o.comp_[c][i];
        divergence_free_ = divergence_free_ && o.divergence_free_;
    }

    /// Per-mode multiply by a real spectral factor (same layout).
    void scale_modes(const std::vector<double>& factor) {
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < comp_[c].size(); ++i)
                comp_[c][i] *= factor[i];
    }

    bool finite() const {
        for (int c = 0; c < 2; ++c)
            for (const auto& v : comp_[c])
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    return false;
        return true;
    }

  private:
    GridPtr grid_;
    std::vector<Complex> comp_[2];
    bool divergence_free_ = false;
};

/// Random band-limited scalar coefficients: independent complex Gaussians
/// with |m|^-2 amplitude decay for 0 < |m_j| <= band, conjugate-symmetrized,
/// zero mean mode. Deterministic in the engine state.
inline void fill_random_band(ScalarField& f, int band, std::mt19937_64& rng) {
    const Grid& g = f.grid();
    const int n = g.n();
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& v : f.coeff()) v = Complex{};
    for (int i = 0; i < n; ++i) {
        const int mi = g.kindex(i);
        if (std::abs(mi) > band) continue;
        for (int j = 0; j < n; ++j) {
            const int mj = g.kindex(j);
            if (std::abs(mj) > band) continue;
            if (mi == 0 && mj == 0) continue;
            const double m2 = static_cast<double>(mi) * mi +
                              static_cast<double>(mj) * mj;
            const double amp = 1.0 / m2;
            f(i, j) = Complex(gauss(rng), gauss(rng)) * amp;
        }
    }
    f.symmetrize();
}

}  // namespace dns2d
