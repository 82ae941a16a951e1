#pragma once

#include <cstddef>
#include <vector>

namespace herdbook::model {

/// Chartist spreads keyed by agent tag, ordered by spread.
///
/// Indexed binary min-heap: minimum lookup is O(1), insertion, removal and
/// update by tag are O(log n). Agent tags live in [0, capacity). The heap
/// array doubles as a dense list of the current chartists, which is what
/// uniform random selection uses (entry_at).
class SpreadBook {
 public:
  struct Entry {
    double spread;
    int agent;
  };

  explicit SpreadBook(int capacity = 0);

  std::size_t size() const { return heap_.size(); }
  bool empty() const { return heap_.empty(); }
  int capacity() const { return static_cast<int>(pos_.size()); }
  bool contains(int agent) const;

  // Preconditions (asserted): agent in range, not already present, spread > 0.
  void insert(int agent, double spread);
  void erase(int agent);
  void update(int agent, double spread);

  double spread_of(int agent) const;

  // Book must be non-empty.
  double min_spread() const { return heap_.front().spread; }
  int min_agent() const { return heap_.front().agent; }

  // i in [0, size()); the order is arbitrary but deterministic.
  const Entry& entry_at(std::size_t i) const { return heap_[i]; }

  // Heap property and position index agree; used by tests and debug checks.
  bool is_consistent() const;

 private:
  void sift_up(std::size_t i);
  void sift_down(std::size_t i);
  void place(std::size_t i, const Entry& e);

  std::vector<Entry> heap_;
  std::vector<int> pos_;  // -1 when the agent holds no quotes
};

}  // namespace herdbook::model
