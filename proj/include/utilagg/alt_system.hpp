#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>

#include "utilagg/error.hpp"
#include "utilagg/utility_table.hpp"

namespace utilagg {

/// A weak order on ordered pairs of states: [x,y] >= [z,w] reads "moving
/// from y to x is at least as strong an improvement as moving from w to z".
class AltSystem {
 public:
  using Oracle = std::function<bool(State, State, State, State)>;

  static AltSystem by_utility(UtilityTable u) {
    AltSystem a;
    a.size_ = u.size();
    a.utility_ = std::move(u);
    return a;
  }

  /// Quadruple comparisons answered by `ge`. Weak-order validity is not
  /// checked here; see check_alt_weak_order.
  static AltSystem by_oracle(std::size_t size, Oracle ge) {
    if (!ge) throw DomainError("alt system oracle is empty");
    AltSystem a;
    a.size_ = size;
    a.oracle_ = std::move(ge);
    return a;
  }

  std::size_t size() const noexcept { return size_; }

  bool ge(State x, State y, State z, State w) const {
    if (utility_) {
      const auto& u = *utility_;
      return u[x] - u[y] >= u[z] - u[w];
    }
    return oracle_(x, y, z, w);
  }
  bool gt(State x, State y, State z, State w) const { return ge(x, y, z, w) && !ge(z, w, x, y); }
  bool eq(State x, State y, State z, State w) const { return ge(x, y, z, w) && ge(z, w, x, y); }

  /// The generating table, when the system was built from one.
  const UtilityTable* utility() const noexcept { return utility_ ? &*utility_ : nullptr; }

 private:
  AltSystem() = default;
  std::size_t size_ = 0;
  std::optional<UtilityTable> utility_;
  Oracle oracle_;
};

}  // namespace utilagg
