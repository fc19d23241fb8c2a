#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace dns2d {

inline constexpr double kPi = 3.14159265358979323846;

/// Square periodic box [0, L]^2 sampled with n points per axis.
///
/// Spectral storage is a full n x n complex lattice in FFT order: the index
/// i on each axis carries the integer wavenumber m = i for i <= n/2 and
/// m = i - n otherwise, so m runs over {-n/2+1, ..., n/2}. The physical
/// wavenumber is k = (2*pi/L) * m. The dealias mask keeps a mode iff
/// 3*|m| <= n on both axes (two-thirds rule).
class Grid {
  public:
    static std::shared_ptr<const Grid> make(int n, double box_length) {
        return std::shared_ptr<const Grid>(new Grid(n, box_length));
    }

    int n() const { return n_; }
    double box_length() const { return length_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

    /// Integer wavenumber carried by axis index i.
    int kindex(int i) const { return kindex_[i]; }
    /// Physical wavenumber (2*pi/L times the integer index).
    double wavenumber(int i) const { return wavenumber_[i]; }
    /// Axis index holding the conjugate partner of index i.
    int conj_index(int i) const { return i == 0 ? 0 : n_ - i; }

    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * n_ + j;
    }

    bool dealias_keep(int i, int j) const { return dealias_[index(i, j)] != 0; }
    const std::vector<std::uint8_t>& dealias_mask() const { return dealias_; }

    /// |k|^2 at lattice point (i, j), physical units.
    double k_squared(int i, int j) const {
        const double kx = wavenumber_[i];
        const double ky = wavenumber_[j];
        return kx * kx + ky * ky;
    }

    /// Largest integer band the two-thirds mask keeps.
    int dealias_band() const { return dealias_band_; }

    bool same_layout(const Grid& other) const {
        return n_ == other.n_ && length_ == other.length_;
    }

  private:
    Grid(int n, double box_length) : n_(n), length_(box_length) {
        if (n < 4 || n % 2 != 0)
            throw std::invalid_argument("Grid: n must be even and >= 4");
        if ((n & (n - 1)) != 0)
            throw std::invalid_argument("Grid: n must be a power of two");
        if (!(box_length > 0.0))
            throw std::invalid_argument("Grid: box_length must be positive");
        kindex_.resize(n);
        wavenumber_.resize(n);
        const double k0 = 2.0 * kPi / box_length;
        for (int i = 0; i < n; ++i) {
            kindex_[i] = (i <= n / 2) ? i : i - n;
            wavenumber_[i] = k0 * kindex_[i];
        }
        dealias_.assign(size(), 0);
        dealias_band_ = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const bool keep =
                    3 * std::abs(kindex_[i]) <= n && 3 * std::abs(kindex_[j]) <= n;
                dealias_[index(i, j)] = keep ? 1 : 0;
            }
        }
        for (int m = 0; 3 * m <= n; ++m) dealias_band_ = m;
    }

    int n_;
    double length_;
    std::vector<int> kindex_;
    std::vector<double> wavenumber_;
    std::vector<std::uint8_t> dealias_;
    int dealias_band_;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace dns2d
