#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace fincov {

/// A subset of a finite carrier {0..63}, stored as a bit-vector.
class PointSet {
public:
  static constexpr int kMaxPoints = 64;

  constexpr PointSet() = default;
  constexpr explicit PointSet(std::uint64_t bits) : bits_(bits) {}
  PointSet(std::initializer_list<int> points) {
    for (int p : points) bits_ |= bit(p);
  }

  static PointSet from_points(const std::vector<int>& points) {
    PointSet s;
    for (int p : points) s.bits_ |= bit(p);
    return s;
  }
  /// {0, ..., n-1}
  static constexpr PointSet full(int n) {
    return PointSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }
  static constexpr PointSet singleton(int p) { return PointSet(bit(p)); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int p) const { return (bits_ >> p) & 1U; }
  constexpr bool subset_of(PointSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool meets(PointSet o) const { return (bits_ & o.bits_) != 0; }
  /// Least member; undefined on the empty set.
  constexpr int first() const { return std::countr_zero(bits_); }

  constexpr PointSet operator|(PointSet o) const { return PointSet(bits_ | o.bits_); }
  constexpr PointSet operator&(PointSet o) const { return PointSet(bits_ & o.bits_); }
  constexpr PointSet operator-(PointSet o) const { return PointSet(bits_ & ~o.bits_); }
  constexpr PointSet operator^(PointSet o) const { return PointSet(bits_ ^ o.bits_); }
  PointSet& operator|=(PointSet o) { bits_ |= o.bits_; return *this; }
  PointSet& operator&=(PointSet o) { bits_ &= o.bits_; return *this; }
  PointSet& operator-=(PointSet o) { bits_ &= ~o.bits_; return *this; }

  constexpr bool operator==(const PointSet&) const = default;
  constexpr auto operator<=>(const PointSet&) const = default;

  std::vector<int> points() const {
    std::vector<int> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) f(std::countr_zero(b));
  }

  /// "{0,2,3}"
  std::string str() const {
    std::string s = "{";
    bool first_item = true;
    for_each([&](int p) {
      if (!first_item) s += ',';
      s += std::to_string(p);
      first_item = false;
    });
    return s + "}";
  }

private:
  static constexpr std::uint64_t bit(int p) { return std::uint64_t{1} << p; }
  std::uint64_t bits_ = 0;
};

/// Calls f on every subset of `s` (including the empty set and `s`).
template <typename F>
void for_each_subset(PointSet s, F&& f) {
  std::uint64_t m = s.bits();
  std::uint64_t sub = m;
  while (true) {
    f(PointSet(sub));
    if (sub == 0) break;
    sub = (sub - 1) & m;
  }
}

}  // namespace fincov
