#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "returnset/errors.hpp"
#include "returnset/rational.hpp"

namespace returnset {

// A finite observed slice of a set of naturals: the members below a horizon.
class IndexWindow {
 public:
  IndexWindow() = default;

  explicit IndexWindow(u64 horizon) : horizon_(horizon) {}

  IndexWindow(u64 horizon, std::vector<u64> members)
      : horizon_(horizon), members_(std::move(members)) {
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (members_[i] >= horizon_)
        throw OutOfRange("window member " + std::to_string(members_[i]) +
                         " not below horizon " + std::to_string(horizon_));
      if (i > 0 && members_[i] <= members_[i - 1])
        throw OutOfRange("window members must be strictly increasing");
    }
  }

  static IndexWindow from_unsorted(u64 horizon, std::vector<u64> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return IndexWindow(horizon, std::move(members));
  }

  u64 horizon() const { return horizon_; }
  const std::vector<u64>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  bool contains(u64 n) const {
    return std::binary_search(members_.begin(), members_.end(), n);
  }

  bool operator==(const IndexWindow&) const = default;

 private:
  u64 horizon_ = 0;
  std::vector<u64> members_;
};

}  // namespace returnset
