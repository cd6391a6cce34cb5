#pragma once

// Dense symmetric Gaussian tensors: sampling and elementary algebra.
//
// Noise normalization: an asymmetric precursor with iid N(0, 2/n) entries is
// averaged over all index permutations, so <W, x^{(x)d}> ~ N(0, 2/n) for every
// unit vector x. Entries are stored row-major as a dense n^d array.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spiked/errors.hpp"
#include "spiked/prior.hpp"
#include "spiked/rng.hpp"

namespace spiked {

inline constexpr std::size_t kDefaultTensorCap = 100'000'000;

/// A real vector of Euclidean norm one (within 1e-12).
class UnitVector {
 public:
  static constexpr double kNormTolerance = 1e-12;

  /// Empty placeholder (size 0); not a valid unit vector.
  UnitVector() = default;

  /// Rescale `v` to unit length. Throws on the zero vector.
  static UnitVector normalize(std::vector<double> v) {
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw std::domain_error("UnitVector::normalize: vector has zero or non-finite norm");
    for (auto& c : v) c /= norm;
    return UnitVector(std::move(v));
  }

  /// Wrap coordinates that are already unit norm.
  static UnitVector from_coords(std::vector<double> v) {
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (v.empty() || std::abs(norm - 1.0) > kNormTolerance)
      throw std::domain_error("UnitVector::from_coords: coordinates are not unit norm");
    return UnitVector(std::move(v));
  }

  static UnitVector basis(std::size_t n, std::size_t i) {
    if (i >= n) throw std::out_of_range("UnitVector::basis: index out of range");
    std::vector<double> v(n, 0.0);
    v[i] = 1.0;
    return UnitVector(std::move(v));
  }

  [[nodiscard]] std::size_t size() const noexcept { return coords_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return coords_[i]; }
  [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
  [[nodiscard]] UnitVector negated() const {
    auto v = coords_;
    for (auto& c : v) c = -c;
    return UnitVector(std::move(v));
  }

  friend bool operator==(const UnitVector&, const UnitVector&) = default;

 private:
  explicit UnitVector(std::vector<double> v) : coords_(std::move(v)) {}
  std::vector<double> coords_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

namespace detail {

/// n^d, or throw CapacityError when it exceeds `cap`.
inline std::size_t checked_volume(std::size_t n, int d, std::size_t cap) {
  if (n < 1) throw std::domain_error("tensor dimension n must be >= 1");
  if (d < 2) throw std::domain_error("tensor order d must be >= 2");
  std::size_t vol = 1;
  for (int k = 0; k < d; ++k) {
    if (vol > cap / n) {
      std::ostringstream msg;
      msg << "tensor of dimension " << n << " and order " << d << " exceeds the memory cap of "
          << cap << " scalars";
      throw CapacityError(msg.str());
    }
    vol *= n;
  }
  if (vol > cap) {
    std::ostringstream msg;
    msg << "tensor of dimension " << n << " and order " << d << " exceeds the memory cap of "
        << cap << " scalars";
    throw CapacityError(msg.str());
  }
  return vol;
}

/// Visit every permutation orbit of multi-indices exactly once.
///
/// `fn(sorted, offsets)` receives the nondecreasing representative and the
/// flat row-major offsets of all its distinct rearrangements.
template <class F>
void for_each_orbit(std::size_t n, int d, F&& fn) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<std::size_t> perm(idx.size());
  std::vector<std::size_t> offsets;
  while (true) {
    offsets.clear();
    perm = idx;
    do {
      std::size_t off = 0;
      for (std::size_t k : perm) off = off * n + k;
      offsets.push_back(off);
    } while (std::next_permutation(perm.begin(), perm.end()));
    fn(std::span<const std::size_t>(idx), std::span<const std::size_t>(offsets));
    // next nondecreasing multi-index
    int pos = d - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - 1) --pos;
    if (pos < 0) break;
    std::size_t v = idx[static_cast<std::size_t>(pos)] + 1;
    for (auto k = static_cast<std::size_t>(pos); k < idx.size(); ++k) idx[k] = v;
  }
}

/// Contract the trailing `levels` axes of a row-major n^d block with x.
/// Returns the leading n^(d - levels) block in `work`.
inline void contract_trailing(std::span<const double> entries, std::size_t n, int levels,
                              std::span<const double> x, std::vector<double>& work) {
  std::size_t size = entries.size() / n;
  work.resize(size);
  for (std::size_t r = 0; r < size; ++r) {
    const double* row = entries.data() + r * n;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    work[r] = s;
  }
  for (int level = 1; level < levels; ++level) {
    std::size_t next = size / n;
    for (std::size_t r = 0; r < next; ++r) {
      const double* row = work.data() + r * n;
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
      work[r] = s;
    }
    size = next;
  }
  work.resize(size);
}

}  // namespace detail

/// Dense, fully symmetric order-d tensor on R^n.
class SymmetricTensor {
 public:
  /// Symmetrize an arbitrary row-major n^d array by averaging each entry over
  /// all index permutations. All rearrangements of an index receive the same
  /// double, so permuted reads are bit-identical.
  static SymmetricTensor symmetrize(std::size_t n, int d, std::vector<double> precursor,
                                    std::size_t cap = kDefaultTensorCap) {
    std::size_t vol = detail::checked_volume(n, d, cap);
    if (precursor.size() != vol)
      throw std::invalid_argument("SymmetricTensor::symmetrize: precursor has wrong size");
    detail::for_each_orbit(n, d, [&](auto, std::span<const std::size_t> offs) {
      double s = 0.0;
      for (std::size_t o : offs) s += precursor[o];
      double avg = s / static_cast<double>(offs.size());
      for (std::size_t o : offs) precursor[o] = avg;
    });
    return SymmetricTensor(n, d, std::move(precursor));
  }

  /// Adopt entries that must already be exactly symmetric.
  static SymmetricTensor from_entries(std::size_t n, int d, std::vector<double> entries,
                                      std::size_t cap = kDefaultTensorCap) {
    std::size_t vol = detail::checked_volume(n, d, cap);
    if (entries.size() != vol)
      throw std::invalid_argument("SymmetricTensor::from_entries: wrong number of entries");
    detail::for_each_orbit(n, d, [&](auto, std::span<const std::size_t> offs) {
      for (std::size_t o : offs)
        if (entries[o] != entries[offs[0]])
          throw std::invalid_argument("SymmetricTensor::from_entries: entries are not symmetric");
    });
    return SymmetricTensor(n, d, std::move(entries));
  }

  static SymmetricTensor zeros(std::size_t n, int d, std::size_t cap = kDefaultTensorCap) {
    return SymmetricTensor(n, d, std::vector<double>(detail::checked_volume(n, d, cap), 0.0));
  }

  /// lambda x^{(x)d}. Each product is formed in sorted index order so the
  /// result is exactly symmetric.
  static SymmetricTensor rank_one(double lambda, const UnitVector& x, int d,
                                  std::size_t cap = kDefaultTensorCap) {
    auto t = zeros(x.size(), d, cap);
    t.add_rank_one_in_place(lambda, x);
    return t;
  }

  [[nodiscard]] std::size_t dim() const noexcept { return n_; }
  [[nodiscard]] int order() const noexcept { return d_; }
  [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }

  [[nodiscard]] double at(std::span<const std::size_t> index) const {
    if (index.size() != static_cast<std::size_t>(d_))
      throw std::invalid_argument("SymmetricTensor::at: index has wrong arity");
    std::size_t off = 0;
    for (std::size_t k : index) {
      if (k >= n_) throw std::out_of_range("SymmetricTensor::at: index out of range");
      off = off * n_ + k;
    }
    return entries_[off];
  }
  [[nodiscard]] double at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }

  /// this + lambda x^{(x)d}
  [[nodiscard]] SymmetricTensor plus_rank_one(double lambda, const UnitVector& x) const {
    SymmetricTensor out = *this;
    out.add_rank_one_in_place(lambda, x);
    return out;
  }

  friend SymmetricTensor operator*(double alpha, const SymmetricTensor& t) {
    SymmetricTensor out = t;
    for (auto& e : out.entries_) e *= alpha;
    return out;
  }

  friend bool operator==(const SymmetricTensor&, const SymmetricTensor&) = default;

 private:
  SymmetricTensor(std::size_t n, int d, std::vector<double> entries)
      : n_(n), d_(d), entries_(std::move(entries)) {}

  void add_rank_one_in_place(double lambda, const UnitVector& x) {
    if (x.size() != n_) throw std::invalid_argument("rank-one update: dimension mismatch");
    detail::for_each_orbit(n_, d_, [&](std::span<const std::size_t> sorted,
                                       std::span<const std::size_t> offs) {
      double p = lambda;
      for (std::size_t k : sorted) p *= x[k];
      for (std::size_t o : offs) entries_[o] += p;
    });
  }

  std::size_t n_ = 0;
  int d_ = 0;
  std::vector<double> entries_;
};

/// <T, x^{(x)d}>: the sum over all index tuples of T times the product of coordinates.
inline double rank_one_inner(const SymmetricTensor& t, std::span<const double> x) {
  if (x.size() != t.dim()) throw std::invalid_argument("rank_one_inner: dimension mismatch");
  std::vector<double> work;
  detail::contract_trailing(t.entries(), t.dim(), t.order(), x, work);
  return work[0];
}

inline double rank_one_inner(const SymmetricTensor& t, const UnitVector& x) {
  return rank_one_inner(t, x.coords());
}

/// v_i = sum_{j_2..j_d} T[i, j_2, ..., j_d] x_{j_2} ... x_{j_d}.
/// Satisfies <contract(T, x), x> = rank_one_inner(T, x).
inline std::vector<double> contract(const SymmetricTensor& t, std::span<const double> x) {
  if (x.size() != t.dim()) throw std::invalid_argument("contract: dimension mismatch");
  std::vector<double> work;
  detail::contract_trailing(t.entries(), t.dim(), t.order() - 1, x, work);
  return work;
}

inline std::vector<double> contract(const SymmetricTensor& t, const UnitVector& x) {
  return contract(t, x.coords());
}

/// Wigner tensor: symmetrized iid N(0, 2/n) precursor, deterministic in `seed`.
inline SymmetricTensor sample_wigner(std::size_t n, int d, RngSeed seed,
                                     std::size_t cap = kDefaultTensorCap) {
  std::size_t vol = detail::checked_volume(n, d, cap);
  auto eng = seed.engine();
  std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / static_cast<double>(n)));
  std::vector<double> precursor(vol);
  for (auto& e : precursor) e = normal(eng);
  return SymmetricTensor::symmetrize(n, d, std::move(precursor), cap);
}

/// Draw a spike from `prior` in dimension n.
inline UnitVector sample_spike(const SpikePrior& prior, std::size_t n, RngSeed seed) {
  if (n < 1) throw std::domain_error("sample_spike: n must be >= 1");
  auto eng = seed.engine();
  switch (prior.kind()) {
    case PriorKind::spherical: {
      std::normal_distribution<double> normal;
      std::vector<double> v(n);
      for (auto& c : v) c = normal(eng);
      return UnitVector::normalize(std::move(v));
    }
    case PriorKind::rademacher: {
      std::bernoulli_distribution coin(0.5);
      double a = 1.0 / std::sqrt(static_cast<double>(n));
      std::vector<double> v(n);
      for (auto& c : v) c = coin(eng) ? a : -a;
      return UnitVector::from_coords(std::move(v));
    }
    case PriorKind::sparse_rademacher: {
      std::size_t k = prior.support_size(n);
      if (k < 1) throw std::domain_error("sample_spike: sparse prior has empty support (round(rho n) = 0)");
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      // partial Fisher-Yates: the first k slots are a uniform k-subset
      for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(eng)]);
      }
      std::bernoulli_distribution coin(0.5);
      double a = 1.0 / std::sqrt(static_cast<double>(k));
      std::vector<double> v(n, 0.0);
      for (std::size_t i = 0; i < k; ++i) v[idx[i]] = coin(eng) ? a : -a;
      return UnitVector::from_coords(std::move(v));
    }
  }
  throw std::logic_error("sample_spike: unknown prior");
}

struct SpikedSample {
  UnitVector spike;
  SymmetricTensor tensor;
};

/// T = lambda x^{(x)d} + W with x from substream 0 and W from substream 1 of `seed`.
inline SpikedSample sample_spiked(const SpikePrior& prior, std::size_t n, int d, double lambda,
                                  RngSeed seed, std::size_t cap = kDefaultTensorCap) {
  if (!(lambda >= 0.0)) throw std::domain_error("sample_spiked: lambda must be >= 0");
  auto x = sample_spike(prior, n, seed.substream(RngSeed::kSpikeStream));
  auto w = sample_wigner(n, d, seed.substream(RngSeed::kNoiseStream), cap);
  auto t = lambda == 0.0 ? std::move(w) : w.plus_rank_one(lambda, x);
  return SpikedSample{std::move(x), std::move(t)};
}

}  // namespace spiked
