#include "decolab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>
#include <omp.h>

#include "decolab/errors.hpp"

namespace decolab::kernels {
namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

// -------------------------------------------------------------- partial trace

Matrix partial_trace(const Matrix& rho, const IndexBlocks& blocks) {
  const auto nk = static_cast<std::ptrdiff_t>(blocks.block_offsets.size());
  const std::size_t nr = blocks.rest_offsets.size();
  Matrix out(nk, nk);
  const cplx* data = rho.data();
  const Index ld = rho.rows();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nk; ++b) {
    const std::size_t col0 = blocks.block_offsets[static_cast<std::size_t>(b)];
    for (std::ptrdiff_t a = 0; a < nk; ++a) {
      const std::size_t row0 = blocks.block_offsets[static_cast<std::size_t>(a)];
      cplx acc{0.0, 0.0};
      for (std::size_t r = 0; r < nr; ++r) {
        const std::size_t off = blocks.rest_offsets[r];
        acc += data[(col0 + off) * static_cast<std::size_t>(ld) + row0 + off];
      }
      out(a, b) = acc;
    }
  }
  return out;
}

Matrix partial_trace_reference(const Matrix& rho, const SubsystemSplit& split,
                               std::span<const std::size_t> keep) {
  std::vector<bool> kept(split.factors(), false);
  for (std::size_t f : keep) {
    if (f >= split.factors()) throw DimensionError("factor index out of range");
    kept[f] = true;
  }
  const auto& dims = split.dims();
  const std::size_t n = split.total_dim();

  auto digits = [&](std::size_t flat) {
    std::vector<std::size_t> d(dims.size());
    for (std::size_t f = dims.size(); f-- > 0;) {
      d[f] = flat % dims[f];
      flat /= dims[f];
    }
    return d;
  };
  auto kept_index = [&](const std::vector<std::size_t>& d) {
    std::size_t k = 0;
    for (std::size_t f = 0; f < dims.size(); ++f)
      if (kept[f]) k = k * dims[f] + d[f];
    return k;
  };

  std::size_t nk = 1;
  for (std::size_t f = 0; f < dims.size(); ++f)
    if (kept[f]) nk *= dims[f];
  Matrix out = Matrix::Zero(idx(nk), idx(nk));
  for (std::size_t i = 0; i < n; ++i) {
    const auto di = digits(i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto dj = digits(j);
      bool same_traced = true;
      for (std::size_t f = 0; f < dims.size() && same_traced; ++f)
        if (!kept[f] && di[f] != dj[f]) same_traced = false;
      if (same_traced) out(idx(kept_index(di)), idx(kept_index(dj))) += rho(idx(i), idx(j));
    }
  }
  return out;
}

// --------------------------------------------------------- gaussian damping

void gaussian_damping(Matrix& rho, double dx, double rate_dt) {
  const Index n = rho.rows();
  std::vector<double> factor(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    const double d = static_cast<double>(k) * dx;
    factor[static_cast<std::size_t>(k)] = std::exp(-rate_dt * d * d);
  }
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      rho(i, j) *= factor[static_cast<std::size_t>(i > j ? i - j : j - i)];
}

void gaussian_damping_reference(Matrix& rho, std::span<const double> positions, double rate_dt) {
  const Index n = rho.rows();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double d = positions[static_cast<std::size_t>(i)] - positions[static_cast<std::size_t>(j)];
      rho(i, j) *= std::exp(-rate_dt * d * d);
    }
}

// ---------------------------------------------------------- sector dephasing

void dephase_sectors(Matrix& rho, std::span<const int> sector, double factor) {
  const Index n = rho.rows();
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) {
    const int sj = sector[static_cast<std::size_t>(j)];
    for (Index i = 0; i < n; ++i)
      if (sector[static_cast<std::size_t>(i)] != sj) rho(i, j) *= factor;
  }
}

void dephase_sectors_reference(Matrix& rho, std::span<const int> sector, double factor) {
  const Index n = rho.rows();
  Matrix mask = Matrix::Ones(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (sector[static_cast<std::size_t>(i)] != sector[static_cast<std::size_t>(j)])
        mask(i, j) = factor;
  rho = rho.cwiseProduct(mask);
}

// ------------------------------------------------------ spectral conjugation

struct SpectralConjugator::Plans {
  std::size_t n = 0;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  fftw_complex* planning_line = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (planning_line) fftw_free(planning_line);
  }
};

SpectralConjugator::SpectralConjugator(std::size_t n) : plans_(std::make_unique<Plans>()) {
  if (n == 0) throw DimensionError("spectral conjugator needs n > 0");
  plans_->n = n;
  plans_->planning_line = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  std::lock_guard lock(planner_mutex());
  const int len = static_cast<int>(n);
  plans_->forward = fftw_plan_dft_1d(len, plans_->planning_line, plans_->planning_line, FFTW_FORWARD,
                                     FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft_1d(len, plans_->planning_line, plans_->planning_line,
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
}

SpectralConjugator::~SpectralConjugator() = default;
SpectralConjugator::SpectralConjugator(SpectralConjugator&&) noexcept = default;
SpectralConjugator& SpectralConjugator::operator=(SpectralConjugator&&) noexcept = default;

std::size_t SpectralConjugator::size() const noexcept { return plans_->n; }

void SpectralConjugator::transform_columns(Matrix& m, int sign) const {
  const std::size_t n = plans_->n;
  const fftw_plan plan = sign < 0 ? plans_->forward : plans_->backward;
  const auto cols = static_cast<std::ptrdiff_t>(m.cols());
#pragma omp parallel
  {
    auto* line = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    auto* buf = reinterpret_cast<cplx*>(line);
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      cplx* col = m.col(c).data();
      std::copy(col, col + n, buf);
      fftw_execute_dft(plan, line, line);
      std::copy(buf, buf + n, col);
    }
    fftw_free(line);
  }
}

void SpectralConjugator::transform_rows(Matrix& m, int sign) const {
  const std::size_t n = plans_->n;
  const fftw_plan plan = sign < 0 ? plans_->forward : plans_->backward;
  const auto rows = static_cast<std::ptrdiff_t>(m.rows());
#pragma omp parallel
  {
    auto* line = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    auto* buf = reinterpret_cast<cplx*>(line);
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
      for (std::size_t k = 0; k < n; ++k) buf[k] = m(r, idx(k));
      fftw_execute_dft(plan, line, line);
      for (std::size_t k = 0; k < n; ++k) m(r, idx(k)) = buf[k];
    }
    fftw_free(line);
  }
}

void SpectralConjugator::apply(Matrix& rho, std::span<const cplx> phase) const {
  const std::size_t n = plans_->n;
  if (static_cast<std::size_t>(rho.rows()) != n || static_cast<std::size_t>(rho.cols()) != n ||
      phase.size() != n)
    throw DimensionError("spectral conjugation size mismatch");
  // ρ̃ = F ρ F^-1 up to normalisation; in that representation
  // U ρ U† multiplies ρ̃(k, k') by phase(k) conj(phase(k')).
  transform_columns(rho, -1);
  transform_rows(rho, +1);
  const double scale = 1.0 / static_cast<double>(n * n);
  const auto cols = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < cols; ++c) {
    const cplx right = std::conj(phase[static_cast<std::size_t>(c)]) * scale;
    for (std::size_t r = 0; r < n; ++r) rho(idx(r), c) *= phase[r] * right;
  }
  transform_columns(rho, +1);
  transform_rows(rho, -1);
}

Matrix spectral_conjugate_reference(const Matrix& rho, std::span<const cplx> phase) {
  const Index n = rho.rows();
  Matrix f(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(j * k % n) /
                           static_cast<double>(n);
      f(j, k) = std::polar(1.0, angle);
    }
  Matrix d = Matrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) d(k, k) = phase[static_cast<std::size_t>(k)];
  const Matrix u = f.adjoint() * d * f / static_cast<double>(n);
  return u * rho * u.adjoint();
}

}  // namespace decolab::kernels
