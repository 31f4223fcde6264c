#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfrac.hpp"
#include "rational.hpp"

namespace sl2ws {

// SL2 = (h, e, f); EXT = (1, h, e, f); V2 = (v2, v0, v-2); V1 = (v1, v-1).
enum class SlotBasis : std::uint8_t { SL2, EXT, V2, V1 };

constexpr unsigned basis_size(SlotBasis b) {
  switch (b) {
    case SlotBasis::SL2: return 3;
    case SlotBasis::EXT: return 4;
    case SlotBasis::V2: return 3;
    case SlotBasis::V1: return 2;
  }
  return 0;
}

constexpr std::string_view to_string(SlotBasis b) {
  switch (b) {
    case SlotBasis::SL2: return "SL2";
    case SlotBasis::EXT: return "EXT";
    case SlotBasis::V2: return "V2";
    case SlotBasis::V1: return "V1";
  }
  return "?";
}

inline SlotBasis slot_basis_from_string(std::string_view s) {
  for (SlotBasis b : {SlotBasis::SL2, SlotBasis::EXT, SlotBasis::V2, SlotBasis::V1})
    if (to_string(b) == s) return b;
  throw Error(Errc::SchemaError, "unknown slot basis '" + std::string(s) + "'");
}

inline std::string_view basis_element_name(SlotBasis b, unsigned i) {
  static constexpr std::array<std::string_view, 3> sl2{"h", "e", "f"};
  static constexpr std::array<std::string_view, 4> ext{"1", "h", "e", "f"};
  static constexpr std::array<std::string_view, 3> v2{"v2", "v0", "v-2"};
  static constexpr std::array<std::string_view, 2> v1{"v1", "v-1"};
  switch (b) {
    case SlotBasis::SL2: return sl2.at(i);
    case SlotBasis::EXT: return ext.at(i);
    case SlotBasis::V2: return v2.at(i);
    case SlotBasis::V1: return v1.at(i);
  }
  return "?";
}

// SL2 indices
inline constexpr unsigned kH = 0, kE = 1, kF = 2;

// Index tuples packed 2 bits per slot, slot 0 in the top bits, so that numeric order
// is lexicographic order and appending slots leaves existing digits in place.
using PackedIndex = std::uint64_t;
inline constexpr std::size_t kMaxSlots = 32;

constexpr unsigned digit(PackedIndex k, std::size_t slot) {
  return static_cast<unsigned>((k >> (62 - 2 * slot)) & 3u);
}
constexpr PackedIndex with_digit(PackedIndex k, std::size_t slot, unsigned v) {
  const unsigned shift = static_cast<unsigned>(62 - 2 * slot);
  return (k & ~(PackedIndex{3} << shift)) | (PackedIndex{v} << shift);
}
inline PackedIndex pack(std::span<const unsigned> idx) {
  PackedIndex k = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) k = with_digit(k, i, idx[i]);
  return k;
}
inline PackedIndex pack(std::initializer_list<unsigned> idx) {
  return pack(std::span<const unsigned>(idx.begin(), idx.size()));
}
inline std::vector<unsigned> unpack(PackedIndex k, std::size_t n) {
  std::vector<unsigned> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = digit(k, i);
  return v;
}
// Delete slots i < j and close the gap.
constexpr PackedIndex remove_slots(PackedIndex k, std::size_t i, std::size_t j) {
  auto drop = [](PackedIndex x, std::size_t s) {
    const unsigned shift = static_cast<unsigned>(62 - 2 * s);
    PackedIndex high = s == 0 ? 0 : (x >> (shift + 2)) << (shift + 2);
    PackedIndex low = x & ((PackedIndex{1} << shift) - 1);
    return high | (low << 2);
  };
  return drop(drop(k, j), i);
}

template <class S>
class Tensor {
 public:
  using Entries = std::map<PackedIndex, S>;

  Tensor() = default;
  explicit Tensor(std::vector<SlotBasis> slots) : slots_(std::move(slots)) {
    if (slots_.size() > kMaxSlots) throw Error(Errc::SlotMismatch, "too many slots");
  }

  static Tensor scalar(const S& value) {
    Tensor t;
    t.add(0, value);
    return t;
  }

  const std::vector<SlotBasis>& slots() const { return slots_; }
  std::size_t arity() const { return slots_.size(); }
  const Entries& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  S at(PackedIndex k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? S(0) : it->second;
  }
  S at(std::initializer_list<unsigned> idx) const { return at(pack(idx)); }

  void add(PackedIndex k, const S& v) {
    using sl2ws::is_zero;
    if (is_zero(v)) return;
    auto [it, inserted] = entries_.try_emplace(k, v);
    if (!inserted) {
      it->second += v;
      if (is_zero(it->second)) entries_.erase(it);
    }
  }
  void add(std::initializer_list<unsigned> idx, const S& v) { add(pack(idx), v); }

  Tensor& operator+=(const Tensor& o) {
    check_same_slots(o);
    for (const auto& [k, v] : o.entries_) add(k, v);
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    check_same_slots(o);
    for (const auto& [k, v] : o.entries_) add(k, -v);
    return *this;
  }
  Tensor& operator*=(const S& s) {
    using sl2ws::is_zero;
    if (is_zero(s)) {
      entries_.clear();
      return *this;
    }
    for (auto& [k, v] : entries_) v *= s;
    return *this;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Tensor a, const S& s) { return a *= s; }
  friend Tensor operator*(const S& s, Tensor a) { return a *= s; }
  friend Tensor operator-(Tensor a) { return a *= S(-1); }
  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.slots_ == b.slots_ && a.entries_ == b.entries_;
  }

 private:
  void check_same_slots(const Tensor& o) const {
    if (slots_ != o.slots_) throw Error(Errc::SlotMismatch, "adding tensors with different slots");
  }

  std::vector<SlotBasis> slots_;
  Entries entries_;
};

template <class S>
Tensor<S> tensor_product(const Tensor<S>& a, const Tensor<S>& b) {
  std::vector<SlotBasis> slots = a.slots();
  slots.insert(slots.end(), b.slots().begin(), b.slots().end());
  Tensor<S> out(std::move(slots));
  const unsigned shift = static_cast<unsigned>(2 * a.arity());
  for (const auto& [ka, va] : a.entries())
    for (const auto& [kb, vb] : b.entries()) out.add(ka | (shift >= 64 ? 0 : kb >> shift), va * vb);
  return out;
}

// Old slot i moves to position perm[i].
template <class S>
Tensor<S> permute_slots(const Tensor<S>& t, std::span<const std::size_t> perm) {
  const std::size_t n = t.arity();
  if (perm.size() != n) throw Error(Errc::SlotMismatch, "permutation size");
  std::vector<SlotBasis> slots(n);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (perm[i] >= n || seen[perm[i]]) throw Error(Errc::SlotMismatch, "not a permutation");
    seen[perm[i]] = true;
    slots[perm[i]] = t.slots()[i];
  }
  Tensor<S> out(std::move(slots));
  for (const auto& [k, v] : t.entries()) {
    PackedIndex nk = 0;
    for (std::size_t i = 0; i < n; ++i) nk = with_digit(nk, perm[i], digit(k, i));
    out.add(nk, v);
  }
  return out;
}

template <class S>
Tensor<S> permute_slots(const Tensor<S>& t, const std::vector<std::size_t>& perm) {
  return permute_slots(t, std::span<const std::size_t>(perm));
}

template <class S>
struct PairingTable {
  std::string name;
  SlotBasis left = SlotBasis::SL2, right = SlotBasis::SL2;
  std::vector<std::vector<S>> values;

  const S& operator()(unsigned a, unsigned b) const { return values.at(a).at(b); }
};

// Contract slot i against slot j with p(value at i, value at j).
template <class S>
Tensor<S> contract(const Tensor<S>& t, std::size_t i, std::size_t j, const PairingTable<S>& p) {
  using sl2ws::is_zero;
  if (i == j || i >= t.arity() || j >= t.arity())
    throw Error(Errc::SlotMismatch, "bad contraction slots");
  if (t.slots()[i] != p.left || t.slots()[j] != p.right)
    throw Error(Errc::SlotMismatch, "pairing " + p.name + " does not match slot bases");
  const std::size_t lo = std::min(i, j), hi = std::max(i, j);
  std::vector<SlotBasis> slots;
  for (std::size_t s = 0; s < t.arity(); ++s)
    if (s != i && s != j) slots.push_back(t.slots()[s]);
  Tensor<S> out(std::move(slots));
  for (const auto& [k, v] : t.entries()) {
    const S& w = p(digit(k, i), digit(k, j));
    if (is_zero(w)) continue;
    out.add(remove_slots(k, lo, hi), v * w);
  }
  return out;
}

// Apply a linear map on consecutive slots [first, first + in_arity). The map is a tensor
// whose first in_arity slots are its inputs and the remaining slots its outputs; the
// outputs replace the inputs in place.
template <class S>
Tensor<S> apply_local(const Tensor<S>& t, std::size_t first, const Tensor<S>& map, std::size_t in_arity) {
  if (first + in_arity > t.arity()) throw Error(Errc::SlotMismatch, "apply_local range");
  for (std::size_t s = 0; s < in_arity; ++s)
    if (t.slots()[first + s] != map.slots()[s]) throw Error(Errc::SlotMismatch, "apply_local bases");
  const std::size_t out_arity = map.arity() - in_arity;
  std::vector<SlotBasis> slots(t.slots().begin(), t.slots().begin() + static_cast<long>(first));
  slots.insert(slots.end(), map.slots().begin() + static_cast<long>(in_arity), map.slots().end());
  slots.insert(slots.end(), t.slots().begin() + static_cast<long>(first + in_arity), t.slots().end());
  // group map entries by input digits
  std::map<PackedIndex, std::vector<std::pair<PackedIndex, S>>> by_input;
  const unsigned in_bits = static_cast<unsigned>(2 * in_arity);
  for (const auto& [k, v] : map.entries()) {
    PackedIndex in = in_bits == 0 ? 0 : k >> (64 - in_bits);
    PackedIndex outd = in_bits == 0 ? k : k << in_bits;
    by_input[in].emplace_back(outd, v);
  }
  Tensor<S> out(std::move(slots));
  const unsigned head_bits = static_cast<unsigned>(2 * first);
  const unsigned tail_bits = static_cast<unsigned>(2 * (first + in_arity));
  for (const auto& [k, v] : t.entries()) {
    PackedIndex head = head_bits == 0 ? 0 : (k >> (64 - head_bits)) << (64 - head_bits);
    PackedIndex in = in_bits == 0 ? 0 : (k << head_bits) >> (64 - in_bits);
    PackedIndex tail = tail_bits >= 64 ? 0 : k << tail_bits;
    auto it = by_input.find(in);
    if (it == by_input.end()) continue;
    for (const auto& [od, mv] : it->second) {
      PackedIndex nk = head;
      if (head_bits < 64) nk |= od >> head_bits;
      const unsigned after = static_cast<unsigned>(2 * (first + out_arity));
      if (after < 64) nk |= tail >> after;
      out.add(nk, v * mv);
    }
  }
  return out;
}

template <class S>
std::string tensor_to_string(const Tensor<S>& t) {
  using sl2ws::to_string;
  std::string out;
  for (const auto& [k, v] : t.entries()) {
    if (!out.empty()) out += " + ";
    out += "(" + to_string(v) + ")";
    for (std::size_t i = 0; i < t.arity(); ++i) {
      out += i == 0 ? "*" : "⊗";
      out += basis_element_name(t.slots()[i], digit(k, i));
    }
  }
  return out.empty() ? "0" : out;
}

// ---- sl2 data ----

inline const PairingTable<Rational>& kappa() {
  static const PairingTable<Rational> k{
      "kappa", SlotBasis::SL2, SlotBasis::SL2, {{2, 0, 0}, {0, 0, 1}, {0, 1, 0}}};
  return k;
}

inline Tensor<Rational> casimir() {
  Tensor<Rational> c({SlotBasis::SL2, SlotBasis::SL2});
  c.add({kH, kH}, make_rational(1, 2));
  c.add({kE, kF}, 1);
  c.add({kF, kE}, 1);
  return c;
}

inline Tensor<Rational> bracket_tensor() {
  Tensor<Rational> b({SlotBasis::SL2, SlotBasis::SL2, SlotBasis::SL2});
  b.add({kH, kE, kF}, 1);
  b.add({kE, kF, kH}, 1);
  b.add({kF, kH, kE}, 1);
  b.add({kH, kF, kE}, -1);
  b.add({kF, kE, kH}, -1);
  b.add({kE, kH, kF}, -1);
  return b;
}

enum class Generator { h, e, f };

// ad_x on a single SL2 basis element: (coefficient, target index) pairs.
inline std::vector<std::pair<int, unsigned>> ad_sl2(Generator x, unsigned y) {
  switch (x) {
    case Generator::h:
      if (y == kE) return {{2, kE}};
      if (y == kF) return {{-2, kF}};
      return {};
    case Generator::e:
      if (y == kH) return {{-2, kE}};
      if (y == kF) return {{1, kH}};
      return {};
    case Generator::f:
      if (y == kH) return {{2, kF}};
      if (y == kE) return {{-1, kH}};
      return {};
  }
  return {};
}

inline Tensor<Rational> adjoint_act(Generator x, const Tensor<Rational>& t) {
  Tensor<Rational> out(t.slots());
  for (std::size_t s = 0; s < t.arity(); ++s) {
    const SlotBasis b = t.slots()[s];
    if (b != SlotBasis::SL2 && b != SlotBasis::EXT)
      throw Error(Errc::SlotMismatch, "adjoint action needs SL2 or EXT slots");
    const unsigned off = b == SlotBasis::EXT ? 1 : 0;
    for (const auto& [k, v] : t.entries()) {
      unsigned d = digit(k, s);
      if (d < off) continue;  // ad_x(1) = 0
      for (auto [c, target] : ad_sl2(x, d - off)) out.add(with_digit(k, s, target + off), v * c);
    }
  }
  return out;
}

inline bool is_invariant(const Tensor<Rational>& t) {
  for (Generator g : {Generator::h, Generator::e, Generator::f})
    if (!adjoint_act(g, t).is_zero()) return false;
  return true;
}

// EXT tensor -> SL2 tensor, keeping only entries free of the unit.
inline Tensor<Rational> project_to_sl2(const Tensor<Rational>& t) {
  std::vector<SlotBasis> slots(t.arity(), SlotBasis::SL2);
  Tensor<Rational> out(slots);
  for (const auto& [k, v] : t.entries()) {
    PackedIndex nk = 0;
    bool ok = true;
    for (std::size_t s = 0; s < t.arity() && ok; ++s) {
      unsigned d = digit(k, s);
      if (t.slots()[s] == SlotBasis::EXT) {
        if (d == 0)
          ok = false;
        else
          d -= 1;
      }
      nk = with_digit(nk, s, d);
    }
    if (ok) out.add(nk, v);
  }
  return out;
}

inline Tensor<Rational> sl2_to_ext(const Tensor<Rational>& t) {
  Tensor<Rational> out(std::vector<SlotBasis>(t.arity(), SlotBasis::EXT));
  for (const auto& [k, v] : t.entries()) {
    PackedIndex nk = 0;
    for (std::size_t s = 0; s < t.arity(); ++s)
      nk = with_digit(nk, s, digit(k, s) + (t.slots()[s] == SlotBasis::SL2 ? 1 : 0));
    out.add(nk, v);
  }
  return out;
}

}  // namespace sl2ws
