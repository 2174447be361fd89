#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Core>

namespace triwave {

using Complex = std::complex<double>;
using CArray = Eigen::ArrayXcd;
using RArray = Eigen::ArrayXd;
using Index = Eigen::Index;

/// Uniform periodic grid on the torus [-L, L)^dim.
///
/// Samples are stored row-major with axis 0 slowest. The dual lattice is kept
/// in FFT order: entry i of `lattice()` is pi*m/L with m = i for i < n/2 and
/// m = i - n otherwise, so the Nyquist mode m = -n/2 sits at i = n/2.
///
/// Grids are immutable; copies share their precomputed tables.
class Grid {
 public:
  Grid(int dim, int n_per_dim, double half_width);
  /// Placeholder grid (1, 8, pi) for default-constructed results.
  Grid();

  int dim() const noexcept { return dim_; }
  int n_per_dim() const noexcept { return n_; }
  double half_width() const noexcept { return half_width_; }

  Index size() const noexcept { return size_; }
  double spacing() const noexcept { return 2.0 * half_width_ / n_; }
  double cell_volume() const noexcept;
  double volume() const noexcept;
  /// pi / L, the spacing of the dual lattice.
  double wavenumber_unit() const noexcept;

  const RArray& lattice() const noexcept;
  /// Lattice with the Nyquist entry zeroed; used by every derivative.
  const RArray& derivative_symbol() const noexcept;
  /// -|k|^2 at every point of the spectral grid, Nyquist entries included.
  const RArray& laplacian_symbol() const noexcept;
  /// Derivative symbol of `axis` evaluated at every point of the spectral grid.
  const RArray& kappa(int axis) const noexcept;
  /// Full lattice wavenumber of `axis` at every point (Nyquist kept).
  const RArray& wavevector(int axis) const noexcept;

  Index stride(int axis) const noexcept;
  int axis_index(Index flat, int axis) const noexcept {
    return static_cast<int>((flat / stride(axis)) % n_);
  }
  /// Physical coordinate x_axis = -L + i*h at every flat index.
  RArray coordinates(int axis) const;
  /// Per-axis coordinates -L + i*h, length n.
  RArray axis_coordinates() const;

  /// True when `wavenumber` is an integer multiple of pi/L.
  bool commensurate(double wavenumber, double tol = 1e-9) const noexcept;

  /// Same sample layout on the torus of half-width `half_width`.
  Grid with_half_width(double half_width) const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.half_width_ == b.half_width_;
  }

 private:
  struct Tables;

  int dim_;
  int n_;
  double half_width_;
  Index size_;
  std::shared_ptr<const Tables> tables_;
};

/// Validating factory: dim in 1..4, n_per_dim even and >= 8, half_width > 0.
Grid make_grid(int dim, int n_per_dim, double half_width);

/// Complex samples on a Grid, one per grid point.
class ComplexField {
 public:
  explicit ComplexField(Grid grid);
  ComplexField(Grid grid, CArray values);

  const Grid& grid() const noexcept { return grid_; }
  const CArray& values() const noexcept { return values_; }
  CArray& values() noexcept { return values_; }
  Index size() const noexcept { return values_.size(); }
  bool all_finite() const;

 private:
  Grid grid_;
  CArray values_;
};

/// Coefficients c_m with f(x_j) = sum_m c_m exp(2 pi i m.j / n).
///
/// The -L offset of the grid is not folded into the phase, so a plane wave
/// exp(i k0.x) maps to a single coefficient of modulus one at k0.
struct Spectrum {
  Grid grid;
  CArray coeffs;
};

Spectrum to_spectral(const ComplexField& f);
ComplexField from_spectral(const Spectrum& s);

ComplexField apply_laplacian(const ComplexField& f);
std::vector<ComplexField> apply_gradient(const ComplexField& f);
ComplexField apply_divergence(const std::vector<ComplexField>& components);

/// Re sum f conj(g) h^dim.
double inner(const ComplexField& f, const ComplexField& g);
double norm_sq(const ComplexField& f);
/// ||grad f||^2 evaluated spectrally.
double gradient_norm_sq(const ComplexField& f);

/// f(x - shift), exact for band-limited data.
ComplexField translate(const ComplexField& f, const Eigen::VectorXd& shift);

/// exp(i k.x) with k given per axis.
ComplexField plane_wave(const Grid& grid, const Eigen::VectorXd& k);

/// Largest |f| over the outermost layer of grid cells, relative to max |f|.
/// Used to flag fields that have not decayed before the torus boundary.
double boundary_ratio(const ComplexField& f);

/// Fraction of spectral energy carried by modes with |m| > n/3 on any axis.
double spectral_tail_fraction(const ComplexField& f);

namespace spectral {

/// In-place forward transform; divides by the point count.
void forward(const Grid& grid, CArray& data);
/// In-place inverse transform.
void inverse(const Grid& grid, CArray& data);

/// ||grad f||^2 from spectral coefficients, optionally shifted by `offset`
/// (the Fourier symbol becomes k + offset).
double gradient_norm_sq(const Grid& grid, const CArray& coeffs,
                        const Eigen::VectorXd* offset = nullptr);

/// Multiplies coefficients by i*kappa_axis.
void apply_derivative(const Grid& grid, int axis, CArray& coeffs);

/// sum_m kappa_axis(m) |c_m|^2 * volume, the building block of momentum.
double first_moment(const Grid& grid, int axis, const CArray& coeffs);

}  // namespace spectral

}  // namespace triwave
