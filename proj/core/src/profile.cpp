#include "gnep/profile.hpp"

#include <numeric>

namespace gnep {

Dims::Dims(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) fail(ErrorKind::InvalidInput, "dims: at least one player required");
  offsets_.reserve(sizes_.size());
  for (int s : sizes_) {
    if (s <= 0) fail(ErrorKind::InvalidInput, "dims: every block size must be positive");
    offsets_.push_back(total_);
    total_ += s;
  }
}

StrategyProfile::StrategyProfile(Dims dims, Eigen::VectorXd flat)
    : dims_(std::move(dims)), flat_(std::move(flat)) {
  if (flat_.size() != dims_.total())
    fail(ErrorKind::InvalidInput, "profile: flat length does not match the block layout");
}

StrategyProfile StrategyProfile::from_blocks(const Dims& dims,
                                             const std::vector<Eigen::VectorXd>& blocks) {
  if (static_cast<int>(blocks.size()) != dims.players())
    fail(ErrorKind::InvalidInput, "profile: one block per player required");
  Eigen::VectorXd flat(dims.total());
  for (int i = 0; i < dims.players(); ++i) {
    if (blocks[static_cast<std::size_t>(i)].size() != dims.size(i))
      fail(ErrorKind::InvalidInput, "profile: block " + std::to_string(i) + " has wrong length");
    flat.segment(dims.offset(i), dims.size(i)) = blocks[static_cast<std::size_t>(i)];
  }
  return StrategyProfile(dims, std::move(flat));
}

StrategyProfile StrategyProfile::zero(const Dims& dims) {
  return StrategyProfile(dims, Eigen::VectorXd::Zero(dims.total()));
}

Eigen::VectorXd with_block(const Dims& dims, const Eigen::VectorXd& x, int i,
                           const Eigen::Ref<const Eigen::VectorXd>& yi) {
  Eigen::VectorXd out = x;
  out.segment(dims.offset(i), dims.size(i)) = yi;
  return out;
}

}  // namespace gnep
