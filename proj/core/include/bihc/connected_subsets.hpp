#pragma once

#include <vector>

namespace bihc::detail {

/// Enumerates every connected vertex subset containing `root`, each exactly
/// once, by branching on frontier vertices in discovery order: choosing the
/// i-th frontier vertex bans the first i-1 for the rest of that branch.
///
/// `neighbors(u)` returns an iterable range of vertex ids, `fits(u, members)`
/// gates growth (it must be monotone: a vertex that does not fit a set does
/// not fit any superset), `visit(members)` sees each subset. Vertices with
/// `blocked[u] != 0` are never used.
template <class Neighbors, class Fits, class Visit>
class ConnectedSubsetWalker {
 public:
  ConnectedSubsetWalker(Neighbors neighbors, Fits fits, Visit visit, std::vector<char> blocked)
      : neighbors_(std::move(neighbors)),
        fits_(std::move(fits)),
        visit_(std::move(visit)),
        marked_(std::move(blocked)) {}

  void run(int root) {
    if (marked_[root]) return;
    marked_[root] = 1;
    members_.push_back(root);
    stack_.clear();
    for (int w : neighbors_(root)) {
      if (!marked_[w]) {
        marked_[w] = 1;
        stack_.push_back(w);
      }
    }
    grow(0, stack_.size());
    for (int w : stack_) marked_[w] = 0;
    members_.pop_back();
    marked_[root] = 0;
  }

 private:
  // The frontier is stack_[begin, end); children push theirs above it.
  void grow(std::size_t begin, std::size_t end) {
    visit_(members_);
    for (std::size_t i = begin; i < end; ++i) {
      const int u = stack_[i];
      if (!fits_(u, members_)) continue;
      const std::size_t child = stack_.size();
      for (std::size_t j = i + 1; j < end; ++j) stack_.push_back(stack_[j]);
      const std::size_t inherited = stack_.size();
      for (int w : neighbors_(u)) {
        if (!marked_[w]) {
          marked_[w] = 1;
          stack_.push_back(w);
        }
      }
      members_.push_back(u);
      grow(child, stack_.size());
      members_.pop_back();
      for (std::size_t j = inherited; j < stack_.size(); ++j) marked_[stack_[j]] = 0;
      stack_.resize(child);
    }
  }

  Neighbors neighbors_;
  Fits fits_;
  Visit visit_;
  std::vector<char> marked_;
  std::vector<int> members_;
  std::vector<int> stack_;
};

template <class Neighbors, class Fits, class Visit>
void for_each_connected_subset(int root, Neighbors neighbors, Fits fits, Visit visit,
                               std::vector<char> blocked) {
  ConnectedSubsetWalker<Neighbors, Fits, Visit> walker(std::move(neighbors), std::move(fits),
                                                       std::move(visit), std::move(blocked));
  walker.run(root);
}

}  // namespace bihc::detail
