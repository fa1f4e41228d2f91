#include "nematic/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nematic/kernels.hpp"

namespace nematic::spectral {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPiSq = kTwoPi * kTwoPi;

// FFTW plans for one grid size. Plans are created once under a global lock (FFTW
// planning is not thread safe); executing them on distinct buffers is.
class FftPlans {
 public:
  explicit FftPlans(int n)
      : real_size_(static_cast<std::size_t>(n) * n), complex_size_(static_cast<std::size_t>(n) * (n / 2 + 1)) {
    AlignedBuffer buf(real_size_, complex_size_);
    // FFTW_ESTIMATE picks the same algorithm on every run, which keeps results
    // bitwise reproducible. Plans assume aligned arrays so SIMD codelets apply.
    r2c_ = fftw_plan_dft_r2c_2d(n, n, buf.real, buf.complex, FFTW_ESTIMATE);
    c2r_ = fftw_plan_dft_c2r_2d(n, n, buf.complex, buf.real, FFTW_ESTIMATE);
    if (r2c_ == nullptr || c2r_ == nullptr) {
      throw std::runtime_error("FFTW planning failed for n = " + std::to_string(n));
    }
  }
  ~FftPlans() {
    fftw_destroy_plan(r2c_);
    fftw_destroy_plan(c2r_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward(const double* in, std::complex<double>* out) const {
    auto* cin = const_cast<double*>(in);
    auto* cout = reinterpret_cast<fftw_complex*>(out);
    if (aligned(cin) && aligned(out)) {
      // Out-of-place r2c leaves its input untouched.
      fftw_execute_dft_r2c(r2c_, cin, cout);
      return;
    }
    AlignedBuffer& buf = scratch();
    std::copy(in, in + real_size_, buf.real);
    fftw_execute_dft_r2c(r2c_, buf.real, buf.complex);
    std::memcpy(cout, buf.complex, complex_size_ * sizeof(fftw_complex));
  }
  // Destroys `in`.
  void backward(std::complex<double>* in, double* out) const {
    auto* cin = reinterpret_cast<fftw_complex*>(in);
    if (aligned(in) && aligned(out)) {
      fftw_execute_dft_c2r(c2r_, cin, out);
      return;
    }
    AlignedBuffer& buf = scratch();
    std::memcpy(buf.complex, cin, complex_size_ * sizeof(fftw_complex));
    fftw_execute_dft_c2r(c2r_, buf.complex, buf.real);
    std::copy(buf.real, buf.real + real_size_, out);
  }

 private:
  struct AlignedBuffer {
    double* real;
    fftw_complex* complex;
    std::size_t real_size;
    std::size_t complex_size;
    AlignedBuffer(std::size_t nr, std::size_t nc)
        : real(fftw_alloc_real(nr)), complex(fftw_alloc_complex(nc)), real_size(nr), complex_size(nc) {
      if (real == nullptr || complex == nullptr) throw std::bad_alloc();
    }
    ~AlignedBuffer() {
      fftw_free(real);
      fftw_free(complex);
    }
    AlignedBuffer(const AlignedBuffer&) = delete;
    AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  };

  static bool aligned(const void* p) { return fftw_alignment_of(static_cast<double*>(const_cast<void*>(p))) == 0; }

  // Per-thread staging arrays for callers whose storage is not SIMD aligned.
  AlignedBuffer& scratch() const {
    thread_local std::map<std::size_t, std::unique_ptr<AlignedBuffer>> buffers;
    auto& slot = buffers[real_size_];
    if (!slot) slot = std::make_unique<AlignedBuffer>(real_size_, complex_size_);
    return *slot;
  }

  std::size_t real_size_;
  std::size_t complex_size_;
  fftw_plan r2c_;
  fftw_plan c2r_;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::shared_ptr<const FftPlans> plans_for(int n) {
  static std::map<int, std::shared_ptr<const FftPlans>> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto plans = std::make_shared<const FftPlans>(n);
  cache.emplace(n, plans);
  return plans;
}

// Wavenumber used by odd-order derivatives: the Nyquist index maps to 0.
int odd_wavenumber(int index, int n) {
  if (index == n / 2) return 0;
  return SpectralField::wavenumber(index, n);
}

double ksq(const SpectralField& f, int r, int c) {
  const double k1 = SpectralField::wavenumber(r, f.grid().n());
  return k1 * k1 + static_cast<double>(c) * c;
}

template <class Weight>
double weighted_sum(const SpectralField& f, Weight w) {
  double s = 0.0;
  for (int r = 0; r < f.rows(); ++r) {
    for (int c = 0; c < f.cols(); ++c) s += f.column_weight(c) * w(r, c) * std::norm(f(r, c));
  }
  return s;
}

}  // namespace

SpectralField::SpectralField(Grid grid)
    : grid_(grid), coeffs_(static_cast<std::size_t>(grid.n()) * (grid.n() / 2 + 1)) {}

std::complex<double> SpectralField::coefficient(int k1, int k2) const {
  const int n = grid_.n();
  if (std::abs(k1) > n / 2 || std::abs(k2) > n / 2) {
    throw std::out_of_range("wavevector outside the resolved range");
  }
  if (k2 < 0) return std::conj(coefficient(-k1, -k2));
  const int r = ((k1 % n) + n) % n;
  return (*this)(r, k2);
}

void SpectralField::set_coefficient(int k1, int k2, std::complex<double> value) {
  const int n = grid_.n();
  if (std::abs(k1) >= n / 2 || std::abs(k2) >= n / 2) {
    throw std::out_of_range("wavevector outside the settable range");
  }
  if (k2 < 0) {
    k1 = -k1;
    k2 = -k2;
    value = std::conj(value);
  }
  const int r = ((k1 % n) + n) % n;
  (*this)(r, k2) = value;
  if (k2 == 0) {
    // Keep the k2 = 0 column Hermitian on its own.
    const int rr = ((-k1 % n) + n) % n;
    (*this)(rr, 0) = std::conj(value);
    if (rr == r) (*this)(r, 0) = value.real();
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(grid_, o.grid_, "SpectralField +=");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(grid_, o.grid_, "SpectralField -=");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& v : coeffs_) v *= s;
  return *this;
}

SpectralField& SpectralField::add_scaled(double s, const SpectralField& o) {
  require_same_grid(grid_, o.grid_, "SpectralField add_scaled");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += s * o.coeffs_[k];
  return *this;
}

SpectralField forward(const ScalarField& f) {
  const Grid& g = f.grid();
  SpectralField out(g);
  plans_for(g.n())->forward(f.data(), out.span().data());
  out *= 1.0 / static_cast<double>(g.size());
  return out;
}

ScalarField inverse(const SpectralField& f) {
  const Grid& g = f.grid();
  std::vector<std::complex<double>> scratch(f.span().begin(), f.span().end());
  ScalarField out(g);
  plans_for(g.n())->backward(scratch.data(), out.data());
  return out;
}

SpectralField derivative(const SpectralField& f, int axis, int order) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("derivative axis must be 1 or 2");
  if (order != 1 && order != 2) throw std::invalid_argument("derivative order must be 1 or 2");
  const int n = f.grid().n();
  SpectralField out(f.grid());
  for (int r = 0; r < f.rows(); ++r) {
    for (int c = 0; c < f.cols(); ++c) {
      const int idx = axis == 1 ? r : c;
      if (order == 1) {
        const double k = odd_wavenumber(idx, n);
        out(r, c) = std::complex<double>(0.0, kTwoPi * k) * f(r, c);
      } else {
        const double k = SpectralField::wavenumber(idx, n);
        out(r, c) = -kFourPiSq * k * k * f(r, c);
      }
    }
  }
  return out;
}

SpectralField laplacian(const SpectralField& f) {
  SpectralField out(f.grid());
  for (int r = 0; r < f.rows(); ++r)
    for (int c = 0; c < f.cols(); ++c) out(r, c) = -kFourPiSq * ksq(f, r, c) * f(r, c);
  return out;
}

void dealias_inplace(SpectralField& f) {
  const int n = f.grid().n();
  const int cut = f.grid().dealias_cutoff();
  for (int r = 0; r < f.rows(); ++r) {
    const int k1 = std::abs(SpectralField::wavenumber(r, n));
    for (int c = 0; c < f.cols(); ++c) {
      if (k1 > cut || c > cut) f(r, c) = 0.0;
    }
  }
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  dealias_inplace(out);
  return out;
}

ScalarField dealiased(const ScalarField& f) { return inverse(dealias(forward(f))); }

SpectralField invert_helmholtz(const SpectralField& f, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("invert_helmholtz requires alpha > 0");
  SpectralField out = f;
  kernels::helmholtz_divide(out.span(), f.grid().n(), alpha);
  return out;
}

void leray_project_inplace(SpectralField& u1, SpectralField& u2) {
  require_same_grid(u1.grid(), u2.grid(), "leray_project");
  kernels::leray(u1.span(), u2.span(), u1.grid().n());
}

VelocityField leray_project(const VelocityField& u) {
  SpectralField a = forward(u.u1);
  SpectralField b = forward(u.u2);
  leray_project_inplace(a, b);
  return VelocityField(inverse(a), inverse(b));
}

double max_divergence(const SpectralField& u1, const SpectralField& u2) {
  const int n = u1.grid().n();
  double m = 0.0;
  for (int r = 0; r < u1.rows(); ++r) {
    const double k1 = SpectralField::wavenumber(r, n);
    for (int c = 0; c < u1.cols(); ++c) {
      m = std::max(m, std::abs(k1 * u1(r, c) + static_cast<double>(c) * u2(r, c)));
    }
  }
  return m;
}

double max_divergence(const VelocityField& u) { return max_divergence(forward(u.u1), forward(u.u2)); }

double l2_squared(const SpectralField& f) {
  return weighted_sum(f, [](int, int) { return 1.0; });
}

double inner(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid(), g.grid(), "spectral inner");
  double s = 0.0;
  for (int r = 0; r < f.rows(); ++r)
    for (int c = 0; c < f.cols(); ++c) s += f.column_weight(c) * std::real(f(r, c) * std::conj(g(r, c)));
  return s;
}

double gradient_l2_squared(const SpectralField& f) {
  const int n = f.grid().n();
  return weighted_sum(f, [&](int r, int c) {
    const double k1 = odd_wavenumber(r, n);
    const double k2 = odd_wavenumber(c, n);
    return kFourPiSq * (k1 * k1 + k2 * k2);
  });
}

double laplacian_l2_squared(const SpectralField& f) {
  return weighted_sum(f, [&](int r, int c) {
    const double s = kFourPiSq * ksq(f, r, c);
    return s * s;
  });
}

double sobolev_squared(const SpectralField& f, int s) {
  return weighted_sum(f, [&](int r, int c) { return std::pow(1.0 + kFourPiSq * ksq(f, r, c), s); });
}

ScalarField pressure_from_divergence(const VelocityField& g) {
  const SpectralField g1 = forward(g.u1);
  const SpectralField g2 = forward(g.u2);
  SpectralField div = derivative(g1, 1, 1);
  div += derivative(g2, 2, 1);
  SpectralField p(g.grid());
  for (int r = 0; r < p.rows(); ++r) {
    for (int c = 0; c < p.cols(); ++c) {
      const double s = kFourPiSq * ksq(p, r, c);
      p(r, c) = s == 0.0 ? std::complex<double>(0.0) : div(r, c) / s;
    }
  }
  return inverse(p);
}

}  // namespace nematic::spectral
