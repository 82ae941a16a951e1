#include "herdbook/model/spread_book.hpp"

#include <cassert>

namespace herdbook::model {

SpreadBook::SpreadBook(int capacity) : pos_(static_cast<std::size_t>(capacity), -1) {
  heap_.reserve(static_cast<std::size_t>(capacity));
}

bool SpreadBook::contains(int agent) const {
  return agent >= 0 && agent < capacity() && pos_[static_cast<std::size_t>(agent)] >= 0;
}

void SpreadBook::place(std::size_t i, const Entry& e) {
  heap_[i] = e;
  pos_[static_cast<std::size_t>(e.agent)] = static_cast<int>(i);
}

void SpreadBook::sift_up(std::size_t i) {
  const Entry e = heap_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (!(e.spread < heap_[parent].spread)) break;
    place(i, heap_[parent]);
    i = parent;
  }
  place(i, e);
}

void SpreadBook::sift_down(std::size_t i) {
  const Entry e = heap_[i];
  const std::size_t n = heap_.size();
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n && heap_[child + 1].spread < heap_[child].spread) ++child;
    if (!(heap_[child].spread < e.spread)) break;
    place(i, heap_[child]);
    i = child;
  }
  place(i, e);
}

void SpreadBook::insert(int agent, double spread) {
  assert(agent >= 0 && agent < capacity());
  assert(!contains(agent));
  assert(spread > 0);
  heap_.push_back({spread, agent});
  pos_[static_cast<std::size_t>(agent)] = static_cast<int>(heap_.size() - 1);
  sift_up(heap_.size() - 1);
}

void SpreadBook::erase(int agent) {
  assert(contains(agent));
  const auto i = static_cast<std::size_t>(pos_[static_cast<std::size_t>(agent)]);
  pos_[static_cast<std::size_t>(agent)] = -1;
  const Entry last = heap_.back();
  heap_.pop_back();
  if (i == heap_.size()) return;
  const double old_spread = heap_[i].spread;
  place(i, last);
  if (last.spread < old_spread) {
    sift_up(i);
  } else {
    sift_down(i);
  }
}

void SpreadBook::update(int agent, double spread) {
  assert(contains(agent));
  assert(spread > 0);
  const auto i = static_cast<std::size_t>(pos_[static_cast<std::size_t>(agent)]);
  const double old_spread = heap_[i].spread;
  heap_[i].spread = spread;
  if (spread < old_spread) {
    sift_up(i);
  } else {
    sift_down(i);
  }
}

double SpreadBook::spread_of(int agent) const {
  assert(contains(agent));
  return heap_[static_cast<std::size_t>(pos_[static_cast<std::size_t>(agent)])].spread;
}

bool SpreadBook::is_consistent() const {
  std::size_t present = 0;
  for (std::size_t a = 0; a < pos_.size(); ++a) {
    if (pos_[a] < 0) continue;
    ++present;
    const auto i = static_cast<std::size_t>(pos_[a]);
    if (i >= heap_.size() || heap_[i].agent != static_cast<int>(a)) return false;
  }
  if (present != heap_.size()) return false;
  for (std::size_t i = 1; i < heap_.size(); ++i) {
    if (heap_[i].spread < heap_[(i - 1) / 2].spread) return false;
  }
  return true;
}

}  // namespace herdbook::model
