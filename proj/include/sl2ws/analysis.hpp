#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "parallel.hpp"
#include "rewrite.hpp"
#include "riordan.hpp"
#include "weight.hpp"

namespace sl2ws {

// ---- the homotopy matrix ----

// Column T holds the tree-basis coordinates of W(linear_tree_basis(n)[T]). Columns are
// stored as integer vectors over a common denominator.
class HomotopyMatrix {
 public:
  HomotopyMatrix(int n, Integer scale, std::vector<std::vector<Integer>> scaled)
      : n_(n), scale_(std::move(scale)), scaled_(std::move(scaled)) {}

  int n() const { return n_; }
  std::size_t rows() const { return tree_basis(n_).size(); }
  std::size_t cols() const { return scaled_.size(); }
  const Integer& scale() const { return scale_; }
  const std::vector<std::vector<Integer>>& scaled_columns() const { return scaled_; }

  RationalVector column(std::size_t j) const {
    RationalVector v(rows());
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = Rational(scaled_[j][i], scale_);
      v[i].canonicalize();
    }
    return v;
  }

  ExactMatrix matrix() const {
    ExactMatrix m(rows(), cols());
    for (std::size_t j = 0; j < cols(); ++j) m.set_column(j, column(j));
    return m;
  }

  // scale * M v for v with integer entries; zero exactly when M v is.
  std::vector<Integer> scaled_multiply(const std::vector<Integer>& v) const {
    std::vector<Integer> out(rows(), 0);
    for (std::size_t j = 0; j < cols(); ++j) {
      if (sgn(v[j]) == 0) continue;
      for (std::size_t i = 0; i < out.size(); ++i) mpz_addmul(out[i].get_mpz_t(), scaled_[j][i].get_mpz_t(), v[j].get_mpz_t());
    }
    return out;
  }

  RationalVector multiply(const RationalVector& v) const {
    RationalVector out(rows());
    for (std::size_t j = 0; j < cols(); ++j) {
      if (is_zero(v[j])) continue;
      for (std::size_t i = 0; i < out.size(); ++i)
        if (sgn(scaled_[j][i]) != 0) out[i] += v[j] * scaled_[j][i];
    }
    for (auto& x : out) x /= scale_;
    return out;
  }

 private:
  int n_;
  Integer scale_;
  std::vector<std::vector<Integer>> scaled_;
};

namespace detail {

inline void check_homotopy_n(int n) {
  if (n < 2 || n > 9) throw Error(Errc::PreconditionViolation, "homotopy matrix needs 2 <= n <= 9");
}

inline HomotopyMatrix build_homotopy_matrix(int n) {
  const TreeBasis& tb = tree_basis(n);
  const std::size_t r = tb.size();
  // integer form of the pivot inverse, ninv / den
  Integer den = 1;
  for (const auto& row : tb.pivot_inverse())
    for (const auto& x : row) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<std::vector<Integer>> ninv(r, std::vector<Integer>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      ninv[i][j] = tb.pivot_inverse()[i][j].get_num() * (den / tb.pivot_inverse()[i][j].get_den());
  // the strut has entry 1/2 at (h, h); linear trees with a trivalent vertex are integral
  const long entry_scale = n == 2 ? 2 : 1;
  Integer scale = den * entry_scale;
  const auto pivots = tb.pivot_indices();
  std::vector<int> mid;
  for (int i = 2; i < n; ++i) mid.push_back(i);
  const std::size_t cols = factorial_size(n - 2);
  std::vector<std::vector<Integer>> scaled(cols);
  parallel_for(cols, [&](std::size_t j) {
    std::vector<int> labels{1};
    for (int x : permutation_unrank(mid, j)) labels.push_back(x);
    labels.push_back(n);
    std::vector<long> x(r);
    for (std::size_t p = 0; p < r; ++p) {
      const Rational v = linear_tree_entry(labels, pivots[p]) * entry_scale;
      if (v.get_den() != 1 || !v.get_num().fits_slong_p()) throw Error(Errc::InexactDivision, "unexpected tree entry");
      x[p] = v.get_num().get_si();
    }
    std::vector<Integer> col(r, 0);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t p = 0; p < r; ++p)
        if (x[p] > 0)
          mpz_addmul_ui(col[i].get_mpz_t(), ninv[i][p].get_mpz_t(), static_cast<unsigned long>(x[p]));
        else if (x[p] < 0)
          mpz_submul_ui(col[i].get_mpz_t(), ninv[i][p].get_mpz_t(), static_cast<unsigned long>(-x[p]));
    scaled[j] = std::move(col);
  });
  return HomotopyMatrix(n, std::move(scale), std::move(scaled));
}

}  // namespace detail

inline const HomotopyMatrix& homotopy_matrix(int n) {
  detail::check_homotopy_n(n);
  static std::mutex mu;
  static std::map<int, std::unique_ptr<HomotopyMatrix>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<HomotopyMatrix>(detail::build_homotopy_matrix(n))).first;
  return *it->second;
}

// ---- image of the homotopy matrix ----

// Rank of the homotopy matrix with an exact certificate: the selected columns are
// independent modulo a prime (so over Q), and the left null vectors are exact and
// annihilate every column, which bounds the rank from above.
class ImageSpace {
 public:
  explicit ImageSpace(const HomotopyMatrix& m) : rows_(m.rows()) {
    const auto& cols = m.scaled_columns();
    ModularEchelon mod(rows_);
    for (std::size_t j = 0; j < cols.size() && mod.rank() < rows_; ++j)
      if (mod.insert(to_sparse_int(cols[j]))) independent_.push_back(j);
    if (independent_.size() < rows_) {
      ExactMatrix t(independent_.size(), rows_);
      for (std::size_t s = 0; s < independent_.size(); ++s)
        for (std::size_t i = 0; i < rows_; ++i) t.set(s, i, Rational(cols[independent_[s]][i]));
      left_null_ = kernel_basis(t);
    }
    for (const auto& c : cols)
      for (const auto& y : left_null_)
        if (!is_zero(dot(y, c))) throw Error(Errc::NoExactSolution, "rank certificate failed");
    if (left_null_.size() + independent_.size() != rows_)
      throw Error(Errc::NoExactSolution, "rank certificate failed");
  }

  std::size_t rank() const { return independent_.size(); }
  std::size_t dimension() const { return rows_; }
  const std::vector<std::size_t>& independent_columns() const { return independent_; }
  // Basis of the vectors orthogonal to the image.
  const std::vector<RationalVector>& left_null() const { return left_null_; }

  bool contains(const RationalVector& v) const {
    if (v.size() != rows_) throw Error(Errc::SlotMismatch, "vector has the wrong length");
    for (const auto& y : left_null_) {
      Rational s = 0;
      for (std::size_t i = 0; i < rows_; ++i)
        if (!is_zero(y[i]) && !is_zero(v[i])) s += y[i] * v[i];
      if (!is_zero(s)) return false;
    }
    return true;
  }

 private:
  static SparseVector to_sparse_int(const std::vector<Integer>& c) {
    SparseVector s;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (sgn(c[i]) != 0) s.emplace(i, Rational(c[i]));
    return s;
  }
  static Rational dot(const RationalVector& y, const std::vector<Integer>& c) {
    Rational s = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!is_zero(y[i]) && sgn(c[i]) != 0) s += y[i] * c[i];
    return s;
  }

  std::size_t rows_;
  std::vector<std::size_t> independent_;
  std::vector<RationalVector> left_null_;
};

inline const ImageSpace& image_space(int n) {
  detail::check_homotopy_n(n);
  const HomotopyMatrix& m = homotopy_matrix(n);
  static std::mutex mu;
  static std::map<int, std::unique_ptr<ImageSpace>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<ImageSpace>(m)).first;
  return *it->second;
}

// Exact basis of the kernel of the homotopy matrix, in linear-tree coordinates.
inline std::vector<RationalVector> homotopy_kernel_basis(int n) { return kernel_basis(homotopy_matrix(n).matrix()); }

struct Table1Row {
  int n = 0;
  Integer dim_c, dim_inv, dim_ker;
};

inline Table1Row table1_row(int n) {
  detail::check_homotopy_n(n);
  const std::size_t cols = factorial_size(n - 2);
  const std::size_t r = image_space(n).rank();
  return {n, Integer(static_cast<unsigned long>(cols)), Integer(static_cast<unsigned long>(tree_basis(n).size())),
          Integer(static_cast<unsigned long>(cols - r))};
}

// (n-2)! - R_n + (1 + (-1)^n)/2
inline Integer kernel_dimension_formula(int n) {
  return factorial(static_cast<unsigned long>(n - 2)) - riordan_number(n) + (n % 2 == 0 ? 1 : 0);
}

// c^{(x)n} lies outside the image and completes it to the whole invariant space.
inline bool cokernel_check(int n) {
  if (n % 2 != 0) throw Error(Errc::PreconditionViolation, "cokernel_check needs even n");
  if (n < 4 || n > 8) throw Error(Errc::PreconditionViolation, "cokernel_check needs 4 <= n <= 8");
  const ImageSpace& im = image_space(n);
  const RationalVector c = tree_basis(n).coordinates(casimir_power(n));
  return !im.contains(c) && im.rank() + 1 == im.dimension();
}

// Sum of the coordinates on strut-only basis trees.
inline Rational phi_coordinates(const RationalVector& coords, int n) {
  if (n % 2 != 0) throw Error(Errc::OddN, "phi needs even n");
  const TreeBasis& tb = tree_basis(n);
  if (coords.size() != tb.size()) throw Error(Errc::SlotMismatch, "coordinate vector has the wrong length");
  Rational s = 0;
  for (std::size_t i = 0; i < tb.size(); ++i)
    if (is_strut_only(tb.trees()[i].partition)) s += coords[i];
  return s;
}

inline Rational phi(const Tensor<Rational>& t, int n) {
  if (n % 2 != 0) throw Error(Errc::OddN, "phi needs even n");
  return phi_coordinates(tree_basis(n).coordinates(t), n);
}

// Whether W of the basis tree of p lies in the image of the homotopy matrix.
inline bool image_membership(const RiordanPartition& p) {
  const int n = p.n();
  const TreeBasis& tb = tree_basis(n);
  return image_space(n).contains(tb.coordinates(tb.weights()[tb.index_of(p)]));
}

// For a strut-only p: W(tree of p) - c^{(x)n} lies in the image.
inline bool strut_congruence(const RiordanPartition& p) {
  const int n = p.n();
  if (!is_strut_only(p)) throw Error(Errc::PreconditionViolation, "partition has a part of size > 2");
  const TreeBasis& tb = tree_basis(n);
  RationalVector v = tb.coordinates(tb.weights()[tb.index_of(p)]);
  const RationalVector c = tb.coordinates(casimir_power(n));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c[i];
  return image_space(n).contains(v);
}

// ---- one-loop relators ----

struct RelatorStats {
  std::size_t diagrams = 0;     // one-loop diagrams visited
  std::size_t differences = 0;  // CV differences formed
  std::size_t kept = 0;         // differences independent modulo p
  std::size_t kernel_dim = 0;
  bool exhausted = false;       // every one-loop diagram was visited
  bool in_kernel = false;       // every vector checked to be killed by the homotopy matrix
  bool from_cache = false;
  double seconds = 0;
};

// Relators of degree k live in C_{k+1}, as linear-tree coordinates.
struct RelatorSet {
  int degree = 0;
  std::vector<RationalVector> vectors;
  RelatorStats stats;
  std::size_t rank() const { return vectors.size(); }
};

struct RelatorOptions {
  bool stop_at_kernel_dim = true;
  std::size_t batch = 64;
};

namespace detail {

// Edges between trivalent vertices that survive pruning of univalent vertices.
inline std::vector<int> cycle_edges(const JacobiDiagram& d) {
  const int V = d.vertex_count();
  std::vector<int> deg(static_cast<std::size_t>(V));
  for (int v = 0; v < V; ++v) deg[static_cast<std::size_t>(v)] = static_cast<int>(d.half_edges_of(v).size());
  std::vector<bool> gone(static_cast<std::size_t>(V), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < V; ++v) {
      if (gone[static_cast<std::size_t>(v)] || deg[static_cast<std::size_t>(v)] != 1) continue;
      gone[static_cast<std::size_t>(v)] = changed = true;
      for (int h : d.half_edges_of(v)) {
        const int w = d.owner(d.partner(h));
        if (!gone[static_cast<std::size_t>(w)]) --deg[static_cast<std::size_t>(w)];
      }
    }
  }
  std::vector<int> out;
  for (int h = 0; h < d.half_edge_count(); ++h) {
    const int p = d.partner(h);
    if (h < p && !gone[static_cast<std::size_t>(d.owner(h))] && !gone[static_cast<std::size_t>(d.owner(p))]) out.push_back(h);
  }
  return out;
}

// Differences of the forest coordinates of the CV expansions at the cycle edges,
// against the first cycle edge.
inline std::vector<ForestVector> cv_differences(const JacobiDiagram& o) {
  std::vector<ForestVector> f;
  for (int e : cycle_edges(o)) {
    const DiagramCombination expanded = cv_expand(o, e);
    DiagramCombination forests;
    for (const auto& [k, t] : expanded.terms()) forests.add(reduce_to_forests(t.diagram), t.coeff);
    f.push_back(forest_coordinates(forests));
  }
  std::vector<ForestVector> out;
  for (std::size_t i = 1; i < f.size(); ++i) {
    ForestVector d = f[i];
    for (const auto& [k, x] : f[0]) d[k] -= x;
    std::erase_if(d, [](const auto& kv) { return is_zero(kv.second); });
    if (!d.empty()) out.push_back(std::move(d));
  }
  return out;
}

inline std::optional<std::filesystem::path> cache_dir() {
  const char* d = std::getenv("PAPERLAB_CACHE_DIR");
  if (!d || !*d) return std::nullopt;
  return std::filesystem::path(d);
}

inline void save_vectors(const std::filesystem::path& p, const std::vector<RationalVector>& vs) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p.string() + ".tmp");
  for (const auto& v : vs) {
    out << v.size();
    for (const auto& x : v) out << ' ' << x.get_str();
    out << '\n';
  }
  out.close();
  std::filesystem::rename(p.string() + ".tmp", p);
}

inline std::optional<std::vector<RationalVector>> load_vectors(const std::filesystem::path& p, std::size_t len) {
  std::ifstream in(p);
  if (!in) return std::nullopt;
  std::vector<RationalVector> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::size_t n = 0;
    if (!(ls >> n) || n != len) return std::nullopt;
    RationalVector v(n);
    std::string tok;
    for (auto& x : v) {
      if (!(ls >> tok)) return std::nullopt;
      try {
        x = parse_rational(tok);
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

// Every vector is killed by M exactly, and the vectors are independent modulo p.
inline bool certify_relators(const HomotopyMatrix& m, const std::vector<RationalVector>& vs) {
  ModularEchelon mod(m.cols());
  for (const auto& v : vs) {
    if (!mod.insert(to_sparse(v))) return false;
    if (std::any_of(v.begin(), v.end(), [](const Rational& x) { return x.get_den() != 1; })) {
      for (const auto& x : m.multiply(v))
        if (!is_zero(x)) return false;
    } else {
      std::vector<Integer> iv;
      for (const auto& x : v) iv.push_back(x.get_num());
      for (const auto& x : m.scaled_multiply(iv))
        if (sgn(x) != 0) return false;
    }
  }
  return mod.rank() == vs.size();
}

}  // namespace detail

// Span of the one-loop relators of degree k: for every one-loop diagram O on k+1 labels,
// the differences of CV expansions at its cycle edges, written in forest coordinates.
// Relators are the combinations of these differences whose parts on disconnected forests
// cancel; their connected parts lie in C_{k+1}. The returned vectors are an echelon basis
// of the span found, checked exactly against the homotopy matrix.
inline RelatorSet one_loop_relators(int k, const RelatorOptions& opt = {}) {
  if (k < 3 || k > 8) throw Error(Errc::PreconditionViolation, "one_loop_relators needs 3 <= k <= 8");
  const int n = k + 1;
  const auto start = std::chrono::steady_clock::now();
  const HomotopyMatrix& m = homotopy_matrix(n);
  RelatorSet out;
  out.degree = k;
  out.stats.kernel_dim = m.cols() - image_space(n).rank();

  std::optional<std::filesystem::path> cached;
  if (auto dir = detail::cache_dir()) cached = *dir / ("relators-" + std::to_string(k) + ".txt");
  if (cached && opt.stop_at_kernel_dim) {
    if (auto vs = detail::load_vectors(*cached, m.cols()); vs && detail::certify_relators(m, *vs)) {
      out.vectors = std::move(*vs);
      out.stats.in_kernel = true;
      out.stats.from_cache = true;
      out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return out;
    }
  }

  std::vector<int> all;
  for (int i = 1; i <= n; ++i) all.push_back(i);
  const std::uint64_t full = label_mask(all) << 32;
  // disconnected forests take the low columns so that they are eliminated first
  constexpr std::size_t kConnected = std::size_t{1} << 40;
  std::map<ForestKey, std::size_t> multi;
  SparseModularEchelon mod;
  std::vector<SparseVector> kept;
  std::size_t connected = 0;
  const std::size_t target = out.stats.kernel_dim;
  auto done = [&] { return opt.stop_at_kernel_dim && target > 0 && connected >= target; };

  std::vector<JacobiDiagram> batch;
  auto flush = [&] {
    std::vector<std::vector<ForestVector>> diffs(batch.size());
    parallel_for(batch.size(), [&](std::size_t i) { diffs[i] = detail::cv_differences(batch[i]); });
    for (const auto& ds : diffs)
      for (const auto& d : ds) {
        if (done()) break;
        ++out.stats.differences;
        SparseVector w;
        for (const auto& [key, x] : d) {
          if (key.size() == 1 && (key[0] >> 32 << 32) == full)
            w.emplace(kConnected + (key[0] & 0xffffffffu), x);
          else
            w.emplace(multi.emplace(key, multi.size()).first->second, x);
        }
        if (auto lead = mod.insert(w)) {
          kept.push_back(std::move(w));
          if (*lead >= kConnected) ++connected;
        }
      }
    batch.clear();
  };
  std::vector<int> lengths;
  for (int c = n; c >= 2; --c) lengths.push_back(c);
  bool stopped = false;
  for_each_one_loop_diagram(
      n,
      [&](const JacobiDiagram& o) {
        ++out.stats.diagrams;
        batch.push_back(o);
        if (batch.size() >= opt.batch) flush();
        if (done()) {
          stopped = true;
          return false;
        }
        return true;
      },
      lengths);
  flush();
  out.stats.exhausted = !stopped;
  out.stats.kept = kept.size();

  EchelonBasis exact;
  for (const auto& w : kept) exact.insert(w);
  for (const auto& [c, row] : exact.pivots()) {
    if (c < kConnected) continue;
    RationalVector v(m.cols());
    for (std::size_t i = 0; i < row.size(); ++i) v[row.cols[i] - kConnected] = Rational(row.vals[i]);
    out.vectors.push_back(std::move(v));
  }
  out.stats.in_kernel = detail::certify_relators(m, out.vectors);
  if (cached && out.stats.in_kernel) detail::save_vectors(*cached, out.vectors);
  out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// The relators of degree k span the kernel of the homotopy matrix on C_{k+1}.
inline bool kernel_span_check(int k) {
  const RelatorSet r = one_loop_relators(k);
  return r.stats.in_kernel && r.rank() == r.stats.kernel_dim;
}

}  // namespace sl2ws
