#include "triwave/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "triwave/errors.hpp"

namespace triwave {

struct Grid::Tables {
  RArray lattice;
  RArray derivative;
  RArray laplacian;
  std::vector<RArray> kappa;  // derivative symbol per axis at every point
  std::vector<RArray> wave;
  std::vector<Index> strides;
};

namespace {

void check_shape(int dim, int n, double half_width) {
  if (dim < 1 || dim > 4)
    throw ValidationError("grid.dim must be in 1..4, got " + std::to_string(dim));
  if (n < 8 || n % 2 != 0)
    throw ValidationError("grid.n_per_dim must be even and >= 8, got " +
                          std::to_string(n));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ValidationError("grid.half_width must be positive and finite");
}

}  // namespace

Grid::Grid(int dim, int n_per_dim, double half_width)
    : dim_(dim), n_(n_per_dim), half_width_(half_width), size_(1) {
  check_shape(dim, n_per_dim, half_width);
  for (int a = 0; a < dim; ++a) size_ *= n_per_dim;

  auto t = std::make_shared<Tables>();
  const double unit = std::numbers::pi / half_width;
  t->lattice.resize(n_);
  for (int i = 0; i < n_; ++i) t->lattice[i] = unit * (i < n_ / 2 ? i : i - n_);
  t->derivative = t->lattice;
  t->derivative[n_ / 2] = 0.0;

  t->strides.assign(static_cast<std::size_t>(dim), 1);
  for (int a = dim - 2; a >= 0; --a) t->strides[a] = t->strides[a + 1] * n_;

  t->laplacian = RArray::Zero(size_);
  t->kappa.resize(static_cast<std::size_t>(dim));
  t->wave.resize(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    RArray& k = t->kappa[a];
    RArray& w = t->wave[a];
    k.resize(size_);
    w.resize(size_);
    const Index s = t->strides[a];
    for (Index p = 0; p < size_; ++p) {
      k[p] = t->derivative[(p / s) % n_];
      w[p] = t->lattice[(p / s) % n_];
    }
    t->laplacian -= w.square();
  }
  tables_ = std::move(t);
}

Grid::Grid() : Grid(1, 8, std::numbers::pi) {}

double Grid::cell_volume() const noexcept { return std::pow(spacing(), dim_); }
double Grid::volume() const noexcept { return std::pow(2.0 * half_width_, dim_); }
double Grid::wavenumber_unit() const noexcept { return std::numbers::pi / half_width_; }
const RArray& Grid::lattice() const noexcept { return tables_->lattice; }
const RArray& Grid::derivative_symbol() const noexcept { return tables_->derivative; }
const RArray& Grid::laplacian_symbol() const noexcept { return tables_->laplacian; }
Index Grid::stride(int axis) const noexcept { return tables_->strides[axis]; }

const RArray& Grid::kappa(int axis) const noexcept { return tables_->kappa[axis]; }
const RArray& Grid::wavevector(int axis) const noexcept { return tables_->wave[axis]; }

RArray Grid::axis_coordinates() const {
  return RArray::LinSpaced(n_, 0.0, n_ - 1.0) * spacing() - half_width_;
}

RArray Grid::coordinates(int axis) const {
  const RArray x = axis_coordinates();
  RArray out(size_);
  const Index s = stride(axis);
  for (Index p = 0; p < size_; ++p) out[p] = x[(p / s) % n_];
  return out;
}

bool Grid::commensurate(double wavenumber, double tol) const noexcept {
  const double m = wavenumber / wavenumber_unit();
  return std::abs(m - std::round(m)) <= tol * std::max(1.0, std::abs(m));
}

Grid Grid::with_half_width(double half_width) const {
  return Grid(dim_, n_, half_width);
}

Grid make_grid(int dim, int n_per_dim, double half_width) {
  return Grid(dim, n_per_dim, half_width);
}

ComplexField::ComplexField(Grid grid)
    : grid_(std::move(grid)), values_(CArray::Zero(grid_.size())) {}

ComplexField::ComplexField(Grid grid, CArray values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ValidationError("field has " + std::to_string(values_.size()) +
                          " samples, grid has " + std::to_string(grid_.size()));
}

bool ComplexField::all_finite() const { return values_.isFinite().all(); }

namespace spectral {

void forward(const Grid& grid, CArray& data) {
  if (data.size() != grid.size()) throw ValidationError("transform size mismatch");
  detail::fft_execute(grid.dim(), grid.n_per_dim(), -1, data.data());
  data /= static_cast<double>(grid.size());
}

void inverse(const Grid& grid, CArray& data) {
  if (data.size() != grid.size()) throw ValidationError("transform size mismatch");
  detail::fft_execute(grid.dim(), grid.n_per_dim(), +1, data.data());
}

double gradient_norm_sq(const Grid& grid, const CArray& coeffs,
                        const Eigen::VectorXd* offset) {
  if (offset == nullptr)
    return grid.volume() * (coeffs.abs2() * (-grid.laplacian_symbol())).sum();
  RArray weight = RArray::Zero(grid.size());
  for (int a = 0; a < grid.dim(); ++a)
    weight += (grid.wavevector(a) + (*offset)[a]).square();
  return grid.volume() * (coeffs.abs2() * weight).sum();
}

void apply_derivative(const Grid& grid, int axis, CArray& coeffs) {
  coeffs *= grid.kappa(axis).cast<Complex>() * Complex(0.0, 1.0);
}

double first_moment(const Grid& grid, int axis, const CArray& coeffs) {
  return grid.volume() * (coeffs.abs2() * grid.kappa(axis)).sum();
}

}  // namespace spectral

Spectrum to_spectral(const ComplexField& f) {
  Spectrum s{f.grid(), f.values()};
  spectral::forward(s.grid, s.coeffs);
  return s;
}

ComplexField from_spectral(const Spectrum& s) {
  CArray data = s.coeffs;
  spectral::inverse(s.grid, data);
  return ComplexField(s.grid, std::move(data));
}

ComplexField apply_laplacian(const ComplexField& f) {
  Spectrum s = to_spectral(f);
  s.coeffs *= f.grid().laplacian_symbol().cast<Complex>();
  return from_spectral(s);
}

std::vector<ComplexField> apply_gradient(const ComplexField& f) {
  const Spectrum s = to_spectral(f);
  std::vector<ComplexField> out;
  for (int a = 0; a < f.grid().dim(); ++a) {
    Spectrum d = s;
    spectral::apply_derivative(d.grid, a, d.coeffs);
    out.push_back(from_spectral(d));
  }
  return out;
}

ComplexField apply_divergence(const std::vector<ComplexField>& components) {
  if (components.empty()) throw ValidationError("divergence of an empty vector");
  const Grid& grid = components.front().grid();
  if (static_cast<int>(components.size()) != grid.dim())
    throw ValidationError("divergence needs one component per axis");
  CArray acc = CArray::Zero(grid.size());
  for (int a = 0; a < grid.dim(); ++a) {
    if (!(components[a].grid() == grid)) throw ValidationError("grid mismatch");
    Spectrum s = to_spectral(components[a]);
    spectral::apply_derivative(grid, a, s.coeffs);
    acc += s.coeffs;
  }
  return from_spectral(Spectrum{grid, std::move(acc)});
}

double inner(const ComplexField& f, const ComplexField& g) {
  if (!(f.grid() == g.grid())) throw ValidationError("inner: grid mismatch");
  return (f.values() * g.values().conjugate()).real().sum() * f.grid().cell_volume();
}

double norm_sq(const ComplexField& f) {
  return f.values().abs2().sum() * f.grid().cell_volume();
}

double gradient_norm_sq(const ComplexField& f) {
  const Spectrum s = to_spectral(f);
  return spectral::gradient_norm_sq(s.grid, s.coeffs);
}

ComplexField translate(const ComplexField& f, const Eigen::VectorXd& shift) {
  const Grid& grid = f.grid();
  if (shift.size() != grid.dim()) throw ValidationError("shift length != grid.dim");
  Spectrum s = to_spectral(f);
  RArray phase = RArray::Zero(grid.size());
  for (int a = 0; a < grid.dim(); ++a) phase -= grid.wavevector(a) * shift[a];
  s.coeffs *= (phase.cast<Complex>() * Complex(0.0, 1.0)).exp();
  return from_spectral(s);
}

ComplexField plane_wave(const Grid& grid, const Eigen::VectorXd& k) {
  if (k.size() != grid.dim()) throw ValidationError("wavevector length != grid.dim");
  RArray phase = RArray::Zero(grid.size());
  for (int a = 0; a < grid.dim(); ++a) phase += grid.coordinates(a) * k[a];
  return ComplexField(grid, (phase.cast<Complex>() * Complex(0.0, 1.0)).exp());
}

double boundary_ratio(const ComplexField& f) {
  const Grid& grid = f.grid();
  const RArray mod = f.values().abs();
  const double peak = mod.maxCoeff();
  if (peak == 0.0) return 0.0;
  const int n = grid.n_per_dim();
  double edge = 0.0;
  for (Index p = 0; p < grid.size(); ++p) {
    for (int a = 0; a < grid.dim(); ++a) {
      const int i = grid.axis_index(p, a);
      if (i == 0 || i == n - 1) {
        edge = std::max(edge, mod[p]);
        break;
      }
    }
  }
  return edge / peak;
}

double spectral_tail_fraction(const ComplexField& f) {
  const Spectrum s = to_spectral(f);
  const Grid& grid = f.grid();
  const int n = grid.n_per_dim();
  const RArray power = s.coeffs.abs2();
  const double total = power.sum();
  if (total == 0.0) return 0.0;
  double tail = 0.0;
  for (Index p = 0; p < grid.size(); ++p) {
    for (int a = 0; a < grid.dim(); ++a) {
      const int i = grid.axis_index(p, a);
      const int m = i < n / 2 ? i : i - n;
      if (3 * std::abs(m) > n) {
        tail += power[p];
        break;
      }
    }
  }
  return tail / total;
}

}  // namespace triwave
