#pragma once

#include <Eigen/Core>
#include <vector>

#include "gnep/errors.hpp"

namespace gnep {

// Player block layout: sizes n_1..n_N and their offsets into the flat
// profile vector of total length n = sum n_i.
class Dims {
 public:
  Dims() = default;
  explicit Dims(std::vector<int> sizes);

  int players() const { return static_cast<int>(sizes_.size()); }
  Eigen::Index total() const { return total_; }
  int size(int i) const { return sizes_.at(static_cast<std::size_t>(i)); }
  Eigen::Index offset(int i) const { return offsets_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& sizes() const { return sizes_; }

  bool operator==(const Dims& other) const { return sizes_ == other.sizes_; }

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::Index> offsets_;
  Eigen::Index total_ = 0;
};

// A joint strategy vector with both views: per-player blocks and the flat
// stacked vector. The two views alias the same storage.
class StrategyProfile {
 public:
  StrategyProfile(Dims dims, Eigen::VectorXd flat);
  static StrategyProfile from_blocks(const Dims& dims, const std::vector<Eigen::VectorXd>& blocks);
  static StrategyProfile zero(const Dims& dims);

  const Dims& dims() const { return dims_; }
  const Eigen::VectorXd& flat() const { return flat_; }
  Eigen::VectorXd& flat() { return flat_; }

  Eigen::VectorBlock<const Eigen::VectorXd> block(int i) const {
    return flat_.segment(dims_.offset(i), dims_.size(i));
  }
  Eigen::VectorBlock<Eigen::VectorXd> block(int i) {
    return flat_.segment(dims_.offset(i), dims_.size(i));
  }

 private:
  Dims dims_;
  Eigen::VectorXd flat_;
};

// Copy of x with block i replaced by y_i; the (x_{-i}, y_i) profile used all
// over the Nikaido-Isoda machinery.
Eigen::VectorXd with_block(const Dims& dims, const Eigen::VectorXd& x, int i,
                           const Eigen::Ref<const Eigen::VectorXd>& yi);

}  // namespace gnep
