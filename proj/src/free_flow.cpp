#include "prodsys/free_flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "prodsys/kernels/simplex.hpp"

namespace prodsys {

TupleDecomposition decompose(const TimeTuple& tuple) {
  if (tuple.empty()) throw PreconditionError("decompose: empty tuple");
  TupleDecomposition d;
  std::size_t i = 0;
  while (i < tuple.size()) {
    const double leader = tuple[i];
    std::size_t j = i + 1;
    while (j < tuple.size() && tuple[j] >= leader) ++j;
    d.parts.emplace_back(tuple.begin() + static_cast<std::ptrdiff_t>(i), tuple.begin() + static_cast<std::ptrdiff_t>(j));
    d.offsets.push_back(static_cast<int>(i));
    i = j;
  }
  return d;
}

std::string format_decomposition(const TupleDecomposition& d) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& part : d.parts) {
    os << '[';
    for (std::size_t i = 0; i < part.size(); ++i) os << (i ? " " : "") << part[i];
    os << ']';
  }
  return os.str();
}

bool is_valid_segmentation(const std::vector<TimeTuple>& parts) {
  for (std::size_t l = 0; l < parts.size(); ++l) {
    const auto& part = parts[l];
    if (part.empty()) return false;
    for (double s : part)
      if (s < part.front()) return false;
    if (l > 0 && !(parts[l - 1].front() > part.front())) return false;
  }
  return !parts.empty();
}

// ---------------------------------------------------------------------------

FreeUnitParam::FreeUnitParam(int truncation) {
  if (truncation < 1) throw PreconditionError("free unit: truncation must be at least 1");
  components_.resize(static_cast<std::size_t>(truncation));
}

const std::vector<IndicatorTerm>& FreeUnitParam::component(int n) const {
  static const std::vector<IndicatorTerm> none;
  if (n < 1 || n > truncation()) return none;
  return components_[static_cast<std::size_t>(n - 1)];
}

void FreeUnitParam::add_term(int n, IndicatorTerm term) {
  if (n < 1 || n > truncation()) throw PreconditionError("free unit: particle number outside 1..N");
  if (static_cast<int>(term.box.size()) != n - 1) throw DimensionError("free unit: term needs n-1 intervals");
  for (const auto& iv : term.box) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo < 0.0 || !(iv.hi > iv.lo))
      throw PreconditionError("free unit: intervals must have finite positive length inside ℝ₊");
  }
  components_[static_cast<std::size_t>(n - 1)].push_back(std::move(term));
}

FreeUnitParam FreeUnitParam::scaled(Complex s) const {
  FreeUnitParam out = *this;
  for (auto& comp : out.components_)
    for (auto& term : comp) term.coeff *= s;
  return out;
}

double FreeUnitParam::extent() const {
  double e = 0.0;
  for (const auto& comp : components_)
    for (const auto& term : comp)
      for (const auto& iv : term.box) e = std::max(e, iv.hi);
  return e;
}

namespace {

bool in_box(const IndicatorTerm& term, const std::vector<double>& args) {
  for (std::size_t k = 0; k < args.size(); ++k)
    if (!term.box[k].contains(args[k])) return false;
  return true;
}

ModuleVector unit_of_B(const Algebra& alg) { return ModuleVector::from_entries({AlgebraElement::identity(alg)}); }

}  // namespace

ModuleVector evaluate_component(TensorPowers& powers, const FreeUnitParam& z, int n, const std::vector<double>& args) {
  if (static_cast<int>(args.size()) != n - 1) throw DimensionError("evaluate_component: need n-1 arguments");
  const Bimodule& fn = powers.power(n);
  ModuleVector v = ModuleVector::zero(fn.algebra(), fn.rank());
  for (const auto& term : z.component(n)) {
    if (in_box(term, args)) v += term.coeff;
  }
  return v;
}

ComponentValue free_unit_component(TensorPowers& powers, const FreeUnitParam& z, double t, const TimeTuple& tuple) {
  const Algebra alg = powers.base().algebra();
  const int n = static_cast<int>(tuple.size());
  if (n == 0) return {unit_of_B(alg), false};
  const Bimodule& fn = powers.power(n);
  ComponentValue zero{ModuleVector::zero(alg, fn.rank()), true};
  if (!(tuple.front() < t)) return zero;
  for (double s : tuple)
    if (s < 0.0) return zero;

  const auto d = decompose(tuple);
  ModuleVector y;
  int degree = 0;
  for (auto it = d.parts.rbegin(); it != d.parts.rend(); ++it) {
    const auto& part = *it;
    std::vector<double> args;
    for (std::size_t k = 1; k < part.size(); ++k) args.push_back(part[k] - part.front());
    const int k = static_cast<int>(part.size());
    const ModuleVector v = evaluate_component(powers, z, k, args);
    y = degree == 0 ? v : powers.tensor(v, degree, y);
    degree += k;
  }
  return {y, false};
}

std::vector<ComponentValue> recursion_terms(TensorPowers& powers, const FreeUnitParam& z, double s, double t,
                                            const TimeTuple& tuple) {
  const Algebra alg = powers.base().algebra();
  const int n = static_cast<int>(tuple.size());
  std::vector<ComponentValue> out;
  for (int k = 0; k <= n; ++k) {
    // s_t ξ_s^k reads the first k entries shifted back by t.
    TimeTuple head(tuple.begin(), tuple.begin() + k);
    for (double& x : head) x -= t;
    const TimeTuple rest(tuple.begin() + k, tuple.end());

    ComponentValue first = k == 0 ? ComponentValue{unit_of_B(alg), false} : free_unit_component(powers, z, s, head);
    ComponentValue second = free_unit_component(powers, z, t, rest);
    const bool structural = first.structural_zero || second.structural_zero;
    ModuleVector value = powers.tensor(first.value, n - k, second.value);
    out.push_back({std::move(value), structural});
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

SuperOperator pair_operator(const Bimodule& fn, const ModuleVector& x, const ModuleVector& y) {
  return SuperOperator::from_map(fn.algebra(), [&](const AlgebraElement& c) { return inner(x, fn.act(c, y)); });
}

int shared_truncation(const FreeUnitParam& z, const FreeUnitParam& zp, int n_max) {
  return std::min({z.truncation(), zp.truncation(), n_max});
}

}  // namespace

SuperOperator overlap_kernel(TensorPowers& powers, const FreeUnitParam& z, const FreeUnitParam& zp, int n_max) {
  const Algebra alg = powers.base().algebra();
  SuperOperator k = SuperOperator::zero(alg);
  for (int n = 1; n <= shared_truncation(z, zp, n_max); ++n) {
    const Bimodule& fn = powers.power(n);
    for (const auto& a : z.component(n)) {
      for (const auto& ap : zp.component(n)) {
        double vol = 1.0;
        for (int i = 0; i < n - 1; ++i) {
          const auto& x = a.box[static_cast<std::size_t>(i)];
          const auto& y = ap.box[static_cast<std::size_t>(i)];
          vol *= std::max(0.0, std::min(x.hi, y.hi) - std::max(x.lo, y.lo));
        }
        if (vol > 0.0) k += pair_operator(fn, a.coeff, ap.coeff) * vol;
      }
    }
  }
  return k;
}

AlgebraElement free_inner_closed(TensorPowers& powers, const FreeUnitParam& z, const FreeUnitParam& zp,
                                 const AlgebraElement& b, double t, int n_max) {
  if (!(t >= 0.0)) throw PreconditionError("free_inner_closed: t must be nonnegative");
  const SuperOperator k = overlap_kernel(powers, z, zp, n_max);
  const double growth = t * k.norm();
  AlgebraElement term = b;
  AlgebraElement sum = b;
  for (int m = 1; m < 1000; ++m) {
    term = k(term) * Complex(t / m);
    sum += term;
    if (m > growth && term.norm() <= 1e-17 * std::max(1.0, sum.norm())) break;
  }
  return sum;
}

SuperOperator inner_grid_operator(TensorPowers& powers, const FreeUnitParam& z, const FreeUnitParam& zp, int n_max,
                                  double h, Exec exec) {
  if (!(h > 0.0)) throw PreconditionError("inner_grid_operator: h must be positive");
  const Algebra alg = powers.base().algebra();
  const int dim = alg.dim();
  const int points = std::max(1, static_cast<int>(std::ceil(std::max(z.extent(), zp.extent()) / h - 1e-9)));
  CMatrix q = CMatrix::Zero(dim, dim);

  for (int n = 1; n <= shared_truncation(z, zp, n_max); ++n) {
    const auto& terms = z.component(n);
    const auto& terms_p = zp.component(n);
    if (terms.empty() || terms_p.empty()) continue;
    const Bimodule& fn = powers.power(n);
    std::vector<CMatrix> pair;  // pair[a * |terms_p| + a']
    for (const auto& a : terms)
      for (const auto& ap : terms_p) pair.push_back(pair_operator(fn, a.coeff, ap.coeff).matrix());

    if (n == 1) {
      for (const auto& m : pair) q += m;
      continue;
    }

    const int inner_dims = n - 1;
    const double weight = std::pow(h, inner_dims);
    // Everything below the leading inner coordinate i0 is one independent chunk.
    auto accumulate_row = [&](int i0, CMatrix& acc) {
      std::vector<int> idx(static_cast<std::size_t>(inner_dims), 0);
      idx[0] = i0;
      std::vector<double> s(static_cast<std::size_t>(inner_dims));
      std::vector<int> active, active_p;
      while (true) {
        for (int d = 0; d < inner_dims; ++d) s[static_cast<std::size_t>(d)] = (idx[static_cast<std::size_t>(d)] + 0.5) * h;
        active.clear();
        active_p.clear();
        for (std::size_t a = 0; a < terms.size(); ++a)
          if (in_box(terms[a], s)) active.push_back(static_cast<int>(a));
        for (std::size_t a = 0; a < terms_p.size(); ++a)
          if (in_box(terms_p[a], s)) active_p.push_back(static_cast<int>(a));
        for (int a : active)
          for (int ap : active_p) acc += weight * pair[static_cast<std::size_t>(a) * terms_p.size() + static_cast<std::size_t>(ap)];
        int d = inner_dims - 1;
        while (d >= 1 && ++idx[static_cast<std::size_t>(d)] == points) idx[static_cast<std::size_t>(d--)] = 0;
        if (d < 1) break;
      }
    };

    if (exec == Exec::serial) {
      for (int i0 = 0; i0 < points; ++i0) accumulate_row(i0, q);
    } else {
      q += kernels::ordered_sum(points, dim, dim, [&](int i0) {
        CMatrix acc = CMatrix::Zero(dim, dim);
        accumulate_row(i0, acc);
        return acc;
      });
    }
  }
  return {alg, q};
}

FreeQuadratureResult free_inner_quadrature(TensorPowers& powers, const FreeUnitParam& z, const FreeUnitParam& zp,
                                           const AlgebraElement& b, double t, int n_max, double h, Exec exec) {
  if (n_max < 1 || !(h > 0.0) || !(t >= 0.0)) throw PreconditionError("free_inner_quadrature: need N >= 1, h > 0, t >= 0");
  FreeQuadratureResult out;
  out.value = b;
  if (t == 0.0) return out;
  const SuperOperator q = inner_grid_operator(powers, z, zp, n_max, h, exec);
  const int grid = std::max(1, static_cast<int>(std::ceil(t / h - 1e-9)));
  const double step = t / grid;
  out.grid = grid;
  out.step = step;

  const double qn = q.norm();
  double weight = 1.0;  // C(M, m) step^m
  double bound = 1.0;   // t^m ‖Q‖^m / m!
  AlgebraElement power = b;
  for (int m = 1; m <= grid; ++m) {
    weight *= step * (grid - m + 1) / m;
    bound *= t * qn / m;
    power = q(power);
    out.value += power * Complex(weight);
    out.outer_terms = m;
    if (bound < 1e-14) break;
  }
  return out;
}

// ---------------------------------------------------------------------------

FreeIndex free_index(TensorPowers& powers, std::vector<double> grid, int truncation) {
  if (grid.size() < 2) throw PreconditionError("free_index: grid needs at least one cell");
  if (truncation < 1) throw PreconditionError("free_index: truncation must be at least 1");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0 || (i > 0 && !(grid[i] > grid[i - 1])))
      throw PreconditionError("free_index: grid must increase strictly inside ℝ₊");
  }
  const Algebra alg = powers.base().algebra();
  const int cells = static_cast<int>(grid.size()) - 1;

  std::vector<int> offsets;
  std::vector<std::pair<int, int>> sectors;  // (n, copies)
  int rank = 0;
  int copies = 1;
  for (int n = 1; n <= truncation; ++n) {
    offsets.push_back(rank);
    sectors.emplace_back(n, copies);
    rank += copies * powers.power(n).rank();
    copies *= cells;
  }

  std::vector<BMatrix> pi;
  for (int p = 0; p < alg.dim(); ++p) {
    BMatrix m(alg, rank, rank);
    for (std::size_t sct = 0; sct < sectors.size(); ++sct) {
      const auto [n, cnt] = sectors[sct];
      const BMatrix& a = powers.power(n).action(p);
      const int kn = a.rows();
      for (int c = 0; c < cnt; ++c) {
        const int start = offsets[sct] + c * kn;
        for (int l = 0; l < alg.num_blocks(); ++l) {
          const int d = alg.block_size(l);
          m.block(l).block(start * d, start * d, kn * d, kn * d) = a.block(l);
        }
      }
    }
    pi.push_back(std::move(m));
  }
  return {Bimodule(alg, rank, std::move(pi)), std::move(grid), truncation, std::move(offsets)};
}

ModuleVector FreeIndex::embed(TensorPowers& powers, const FreeUnitParam& z, double tol) const {
  const Algebra alg = module.algebra();
  auto on_grid = [&](double x) {
    return std::any_of(grid.begin(), grid.end(), [&](double g) { return std::abs(g - x) <= tol; });
  };
  for (int n = 1; n <= z.truncation(); ++n)
    for (const auto& term : z.component(n))
      for (const auto& iv : term.box)
        if (!on_grid(iv.lo) || !on_grid(iv.hi)) throw PreconditionError("free_index: interval end point off the grid");
  if (z.truncation() > truncation) {
    for (int n = truncation + 1; n <= z.truncation(); ++n)
      if (!z.component(n).empty()) throw PreconditionError("free_index: unit exceeds the index truncation");
  }

  BMatrix out(alg, module.rank(), 1);
  const int c = cells();
  for (int n = 1; n <= truncation; ++n) {
    const auto& terms = z.component(n);
    const int kn = powers.power(n).rank();
    const int dims = n - 1;
    int count = 1;
    for (int i = 0; i < dims; ++i) count *= c;
    std::vector<int> idx(static_cast<std::size_t>(dims), 0);
    for (int cell = 0; cell < count; ++cell) {
      int rem = cell;
      for (int d = dims - 1; d >= 0; --d) {
        idx[static_cast<std::size_t>(d)] = rem % c;
        rem /= c;
      }
      double vol = 1.0;
      for (int d = 0; d < dims; ++d) {
        const int i = idx[static_cast<std::size_t>(d)];
        vol *= grid[static_cast<std::size_t>(i) + 1] - grid[static_cast<std::size_t>(i)];
      }
      ModuleVector v = ModuleVector::zero(alg, kn);
      for (const auto& term : terms) {
        bool inside = true;
        for (int d = 0; d < dims && inside; ++d) {
          const int i = idx[static_cast<std::size_t>(d)];
          const auto& iv = term.box[static_cast<std::size_t>(d)];
          inside = grid[static_cast<std::size_t>(i)] >= iv.lo - tol && grid[static_cast<std::size_t>(i) + 1] <= iv.hi + tol;
        }
        if (inside) v += term.coeff;
      }
      v *= Complex(std::sqrt(vol));
      const int start = offsets[static_cast<std::size_t>(n - 1)] + cell * kn;
      for (int l = 0; l < alg.num_blocks(); ++l) {
        const int d = alg.block_size(l);
        out.block(l).block(start * d, 0, kn * d, d) = v.column().block(l);
      }
    }
  }
  return ModuleVector(std::move(out));
}

}  // namespace prodsys
