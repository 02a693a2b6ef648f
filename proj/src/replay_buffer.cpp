#include "dara/replay_buffer.hpp"

#include <stdexcept>

namespace dara {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayBuffer::push(const Trajectory& trajectory) {
  if (items_.size() < capacity_) {
    items_.push_back(trajectory);
    return;
  }
  items_[head_] = trajectory;
  head_ = (head_ + 1) % capacity_;
}

std::optional<std::vector<Trajectory>> ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
  if (!ready(batch_size)) return std::nullopt;
  std::vector<Trajectory> batch;
  batch.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) batch.push_back(items_[rng.below(items_.size())]);
  return batch;
}

const Trajectory& ReplayBuffer::at(std::size_t i) const {
  if (i >= items_.size()) throw std::out_of_range("replay index");
  return items_[(head_ + i) % items_.size()];
}

}  // namespace dara
