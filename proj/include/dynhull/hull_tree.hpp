#pragma once

// Concurrent dynamic planar convex hull.
//
// HullTree is an external binary search tree keyed on y. Points live at the
// leaves; every node caches the left and right hull chains of the points
// below it, so the hull of the whole set is the pair of chains at the root.
// After a structural write, a leaf-to-root merge pass recomputes each
// ancestor's chains from its two children.
//
// Three locking strategies share the same tree logic:
//   Coarse  one global mutex around every operation
//   Fine    one mutex per node, held hand-over-hand during merges
//   Finer   two mutexes per node, one per chain; a merge holds the left lock
//           of a node while updating its left chain and the right lock while
//           updating its right chain, so two merges can overlap on a node
//
// Writes search without locks, lock a small window, validate it and retry
// from the root on failure. Chains are immutable and published by swapping a
// pointer; readers never lock (except under Coarse). Unlinked nodes, routing
// records and chain boxes are reclaimed through an EpochDomain.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dynhull/chain.hpp"
#include "dynhull/epoch.hpp"
#include "dynhull/geometry.hpp"

namespace dynhull {

enum class Strategy { Coarse, Fine, Finer };

enum class ReadMode {
  RetryUntilConsistent,  // re-read the root until both chains agree on their endpoints
  Convexify,             // on mismatch, rebuild a hull from the union of both chains
  Raw,                   // return whatever the root holds
};

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Coarse: return "coarse";
    case Strategy::Fine: return "fine";
    case Strategy::Finer: return "finer";
  }
  return "?";
}

inline const char* to_string(ReadMode m) {
  switch (m) {
    case ReadMode::RetryUntilConsistent: return "retry";
    case ReadMode::Convexify: return "convexify";
    case ReadMode::Raw: return "raw";
  }
  return "?";
}

class EmptyTreeError : public std::logic_error {
 public:
  EmptyTreeError() : std::logic_error("search on an empty HullTree") {}
};

struct HullTreeOptions {
  /// Keep unlinked nodes alive until destruction and record every node, so
  /// tests can observe deletion flags. Memory grows without bound.
  bool retain_nodes = false;
  /// Check that merges never overtake each other between tree levels.
  bool audit_merge_order = false;
};

struct HullTreeStats {
  std::uint64_t retries = 0;             // write validations that failed
  std::uint64_t early_stops = 0;         // merges that stopped below the root
  std::uint64_t merge_steps = 0;         // nodes visited by merges
  std::uint64_t lock_acquisitions = 0;   // node locks taken (including try_lock successes)
  std::uint64_t inconsistent_reads = 0;  // root reads whose chains disagreed
  std::uint64_t order_violations = 0;    // crossing merges seen by the order audit
};

struct TreeAudit {
  bool ok = true;
  std::string message;
  std::size_t nodes = 0;
  std::size_t leaves = 0;
  std::size_t height = 0;  // edges on the longest root-to-leaf path
};

/// An immutable view of the two chains at the root.
class HullSnapshot {
 public:
  HullSnapshot() : left_(empty_chain(Side::LeftChain)), right_(empty_chain(Side::RightChain)) {}
  HullSnapshot(std::shared_ptr<const Chain> left, std::shared_ptr<const Chain> right)
      : left_(std::move(left)), right_(std::move(right)) {}
  explicit HullSnapshot(Hull h)
      : left_(std::make_shared<const Chain>(std::move(h.left))),
        right_(std::make_shared<const Chain>(std::move(h.right))) {}

  const Chain& left() const { return *left_; }
  const Chain& right() const { return *right_; }
  bool empty() const { return left_->empty(); }
  bool consistent() const { return endpoints_match(*left_, *right_); }
  Hull to_hull() const { return {*left_, *right_}; }

 private:
  static std::shared_ptr<const Chain> empty_chain(Side s) {
    static const auto left = std::make_shared<const Chain>(Side::LeftChain, std::vector<Point>{});
    static const auto right = std::make_shared<const Chain>(Side::RightChain, std::vector<Point>{});
    return s == Side::LeftChain ? left : right;
  }

  std::shared_ptr<const Chain> left_, right_;
};

namespace detail {

using ChainPtr = std::shared_ptr<const Chain>;

// Atomically replaceable chain reference. The box indirection lets readers
// copy the shared_ptr without locking; old boxes go through the epoch domain.
class ChainCell {
 public:
  explicit ChainCell(ChainPtr c) : box_(new Box{std::move(c)}) {}
  ~ChainCell() { delete box_.load(std::memory_order_relaxed); }
  ChainCell(const ChainCell&) = delete;
  ChainCell& operator=(const ChainCell&) = delete;

  // Callers must be pinned.
  const Chain& peek() const { return *box_.load(std::memory_order_acquire)->chain; }
  ChainPtr share() const { return box_.load(std::memory_order_acquire)->chain; }

  void publish(ChainPtr c, EpochDomain& epochs) {
    Box* old = box_.exchange(new Box{std::move(c)}, std::memory_order_acq_rel);
    epochs.retire(old);
  }

 private:
  struct Box {
    ChainPtr chain;
  };
  std::atomic<Box*> box_;
};

struct Node;

// Routing record of an internal node. Immutable; replaced as a whole so a
// lock-free search always sees a key together with the children it routes to.
struct Links {
  double key;  // smallest y in the top subtree
  Node* top;
  Node* bottom;
};

struct Node {
  Node(const Point& p, Node* parent_node, std::uint64_t serial)
      : point(p),
        parent(parent_node),
        left_chain(std::make_shared<const Chain>(Side::LeftChain, std::vector<Point>{p})),
        right_chain(std::make_shared<const Chain>(Side::RightChain, std::vector<Point>{p})),
        id(serial) {}
  ~Node() { delete links.load(std::memory_order_relaxed); }

  // left_lock guards the left chain, point and links; right_lock guards the
  // right chain. Under Fine, left_lock is the only node lock.
  std::mutex left_lock;
  std::mutex right_lock;
  std::atomic<const Links*> links{nullptr};  // null <=> leaf
  Point point;                               // meaningful while a leaf
  std::atomic<Node*> parent;
  ChainCell left_chain;
  ChainCell right_chain;
  std::atomic<bool> deleted{false};

  // Merge-order audit. id is unique per allocation (addresses get reused).
  // version[s] counts publishes of chain s; seen_version[c][s] is the version
  // of child c (0 = top, 1 = bottom) carried by the last merge that came up
  // from that child into chain s, and seen_child[c][s] that child's id.
  const std::uint64_t id;
  std::array<std::atomic<std::uint64_t>, 2> version{};
  std::array<std::array<std::atomic<std::uint64_t>, 2>, 2> seen_child{};
  std::array<std::array<std::atomic<std::uint64_t>, 2>, 2> seen_version{};

  bool is_leaf() const { return links.load(std::memory_order_acquire) == nullptr; }
  ChainCell& chain(Side s) { return s == Side::LeftChain ? left_chain : right_chain; }
  const ChainCell& chain(Side s) const { return s == Side::LeftChain ? left_chain : right_chain; }
};

// Contention-friendly counters: each thread adds to its own cache line.
class StripedCounters {
 public:
  enum Id { Retries, EarlyStops, MergeSteps, Locks, Inconsistent, OrderViolations, kCount };

  void add(Id id, std::uint64_t n = 1) {
    stripes_[stripe_index()].c[id].fetch_add(n, std::memory_order_relaxed);
  }
  std::uint64_t sum(Id id) const {
    std::uint64_t s = 0;
    for (const auto& st : stripes_) s += st.c[id].load(std::memory_order_relaxed);
    return s;
  }
  void reset() {
    for (auto& st : stripes_)
      for (auto& c : st.c) c.store(0, std::memory_order_relaxed);
  }

 private:
  static constexpr std::size_t kStripes = 32;
  struct alignas(64) Stripe {
    std::array<std::atomic<std::uint64_t>, kCount> c{};
  };
  static std::size_t stripe_index() {
    static std::atomic<std::size_t> next{0};
    thread_local const std::size_t idx = next.fetch_add(1, std::memory_order_relaxed) % kStripes;
    return idx;
  }
  std::array<Stripe, kStripes> stripes_{};
};

}  // namespace detail

class HullTree {
 public:
  explicit HullTree(Strategy strategy = Strategy::Finer, HullTreeOptions options = {})
      : strategy_(strategy), options_(options) {}

  /// No operation may be in flight.
  ~HullTree() {
    std::vector<detail::Node*> stack;
    if (auto* r = root_.load(std::memory_order_relaxed)) stack.push_back(r);
    while (!stack.empty()) {
      auto* n = stack.back();
      stack.pop_back();
      if (const auto* l = n->links.load(std::memory_order_relaxed)) {
        stack.push_back(l->top);
        stack.push_back(l->bottom);
      }
      delete n;
    }
    for (auto* n : graveyard_) delete n;
  }

  HullTree(const HullTree&) = delete;
  HullTree& operator=(const HullTree&) = delete;

  Strategy strategy() const { return strategy_; }

  /// Adds `p`. Returns false if `p` is already present. Throws GeometryError
  /// for non-finite input and GeneralPositionError if another point has the
  /// same y.
  bool insert(const Point& p) {
    require_finite(p);
    auto guard = epochs_.pin();
    auto global = coarse_lock();
    for (;;) {
      detail::Node* root = root_.load(std::memory_order_acquire);
      if (!root) {
        std::lock_guard rg(root_mutex_);
        if (root_.load(std::memory_order_acquire)) continue;
        root_.store(allocate(p, nullptr), std::memory_order_release);
        return true;
      }
      detail::Node* u = descend(root, p.y);
      lock_left(u);
      if (!u->is_leaf() || u->deleted.load(std::memory_order_acquire)) {
        unlock_left(u);
        counters_.add(detail::StripedCounters::Retries);
        continue;
      }
      if (u->point == p) {
        unlock_left(u);
        return false;
      }
      if (u->point.y == p.y) {
        const Point existing = u->point;
        unlock_left(u);
        throw GeneralPositionError("insert " + to_string(p) + ": y already used by " + to_string(existing));
      }
      const Point& hi = p.y > u->point.y ? p : u->point;
      const Point& lo = p.y > u->point.y ? u->point : p;
      auto* top = allocate(hi, u);
      auto* bottom = allocate(lo, u);
      const Hull pair = Hull::of_pair(lo, hi);
      publish(u, Side::LeftChain, std::make_shared<const Chain>(pair.left));
      publish(u, Side::RightChain, std::make_shared<const Chain>(pair.right));
      u->links.store(new detail::Links{hi.y, top, bottom}, std::memory_order_release);
      unlock_left(u);
      merge(u);
      return true;
    }
  }

  /// Removes `p` if present.
  bool erase(const Point& p) {
    require_finite(p);
    auto guard = epochs_.pin();
    auto global = coarse_lock();
    for (;;) {
      detail::Node* root = root_.load(std::memory_order_acquire);
      if (!root) return false;
      detail::Node* u = descend(root, p.y);
      lock_left(u);
      if (!u->is_leaf() || u->deleted.load(std::memory_order_acquire)) {
        unlock_left(u);
        counters_.add(detail::StripedCounters::Retries);
        continue;
      }
      if (!(u->point == p)) {
        unlock_left(u);
        return false;
      }
      detail::Node* par = u->parent.load(std::memory_order_acquire);
      if (!par) {
        unlock_left(u);
        if (erase_root_leaf(u, p)) return true;
        counters_.add(detail::StripedCounters::Retries);
        continue;
      }
      const detail::Links* pl = par->links.load(std::memory_order_acquire);
      detail::Node* sib = nullptr;
      if (pl) sib = pl->top == u ? pl->bottom : (pl->bottom == u ? pl->top : nullptr);
      if (!sib) {
        unlock_left(u);
        counters_.add(detail::StripedCounters::Retries);
        continue;
      }
      if (!try_lock_left(sib)) {
        unlock_left(u);
        counters_.add(detail::StripedCounters::Retries);
        continue;
      }
      lock_left(par);
      const bool valid = !sib->deleted.load(std::memory_order_acquire) &&
                         !par->deleted.load(std::memory_order_acquire) &&
                         par->links.load(std::memory_order_acquire) == pl;
      if (!valid) {
        unlock_left(par);
        unlock_left(sib);
        unlock_left(u);
        counters_.add(detail::StripedCounters::Retries);
        continue;
      }
      publish(par, Side::LeftChain, sib->left_chain.share());
      publish(par, Side::RightChain, sib->right_chain.share());
      if (const detail::Links* sl = sib->links.load(std::memory_order_acquire)) {
        par->links.store(new detail::Links{sl->key, sl->top, sl->bottom}, std::memory_order_release);
        sl->top->parent.store(par, std::memory_order_release);
        sl->bottom->parent.store(par, std::memory_order_release);
      } else {
        par->point = sib->point;
        par->links.store(nullptr, std::memory_order_release);
      }
      u->deleted.store(true, std::memory_order_release);
      sib->deleted.store(true, std::memory_order_release);
      unlock_left(par);
      unlock_left(sib);
      unlock_left(u);
      epochs_.retire(pl);
      retire_node(u);
      retire_node(sib);
      merge(par);
      return true;
    }
  }

  HullSnapshot get_hull(ReadMode mode = ReadMode::Raw) const {
    auto guard = epochs_.pin();
    auto global = coarse_lock();
    for (;;) {
      HullSnapshot s = root_snapshot();
      if (mode == ReadMode::Raw || s.consistent()) return s;
      counters_.add(detail::StripedCounters::Inconsistent);
      if (mode == ReadMode::Convexify) return HullSnapshot(convexify(s.left(), s.right()));
      std::this_thread::yield();
    }
  }

  /// True iff `p` lies inside or on the hull currently held at the root.
  bool contains(const Point& p) const {
    auto guard = epochs_.pin();
    auto global = coarse_lock();
    const HullSnapshot s = root_snapshot();
    return hull_contains(s.left(), s.right(), p);
  }

  bool empty() const { return root_.load(std::memory_order_acquire) == nullptr; }

  /// Point at the leaf reached by routing on `p.y`. Quiescent use only.
  Point search(const Point& p) const {
    auto guard = epochs_.pin();
    detail::Node* root = root_.load(std::memory_order_acquire);
    if (!root) throw EmptyTreeError();
    return descend(root, p.y)->point;
  }

  // The following walk the whole tree and are meaningful only when no
  // operation is in flight.

  std::vector<Point> points() const {
    std::vector<Point> out;
    for_each_node([&](const detail::Node* n) {
      if (n->is_leaf()) out.push_back(n->point);
    });
    return out;
  }

  std::size_t size() const { return points().size(); }

  TreeAudit audit() const;

  HullTreeStats stats() const {
    using C = detail::StripedCounters;
    return {counters_.sum(C::Retries),      counters_.sum(C::EarlyStops),
            counters_.sum(C::MergeSteps),   counters_.sum(C::Locks),
            counters_.sum(C::Inconsistent), counters_.sum(C::OrderViolations)};
  }
  void reset_stats() { counters_.reset(); }

  /// Deletion flag of every node ever allocated, in allocation order.
  /// Requires HullTreeOptions::retain_nodes.
  std::vector<bool> deletion_flags() const {
    if (!options_.retain_nodes) throw std::logic_error("deletion_flags requires retain_nodes");
    std::vector<detail::Node*> nodes;
    {
      std::lock_guard lk(registry_mutex_);
      nodes = registry_;
    }
    std::vector<bool> flags;
    flags.reserve(nodes.size());
    for (auto* n : nodes) flags.push_back(n->deleted.load(std::memory_order_acquire));
    return flags;
  }

 private:
  using Node = detail::Node;

  std::unique_lock<std::mutex> coarse_lock() const {
    if (strategy_ == Strategy::Coarse) return std::unique_lock(global_mutex_);
    return {};
  }

  void lock_left(Node* n) {
    if (strategy_ == Strategy::Coarse) return;
    n->left_lock.lock();
    counters_.add(detail::StripedCounters::Locks);
  }
  bool try_lock_left(Node* n) {
    if (strategy_ == Strategy::Coarse) return true;
    if (!n->left_lock.try_lock()) return false;
    counters_.add(detail::StripedCounters::Locks);
    return true;
  }
  void unlock_left(Node* n) {
    if (strategy_ != Strategy::Coarse) n->left_lock.unlock();
  }
  void lock_right(Node* n) {
    n->right_lock.lock();
    counters_.add(detail::StripedCounters::Locks);
  }

  static Node* descend(Node* n, double y) {
    while (const detail::Links* l = n->links.load(std::memory_order_acquire)) n = y >= l->key ? l->top : l->bottom;
    return n;
  }

  HullSnapshot root_snapshot() const {
    Node* root = root_.load(std::memory_order_acquire);
    if (!root) return {};
    return HullSnapshot(root->left_chain.share(), root->right_chain.share());
  }

  Node* allocate(const Point& p, Node* parent) {
    const std::uint64_t id = options_.audit_merge_order ? next_id_.fetch_add(1, std::memory_order_relaxed) : 0;
    auto* n = new Node(p, parent, id);
    if (options_.retain_nodes) {
      std::lock_guard lk(registry_mutex_);
      registry_.push_back(n);
    }
    return n;
  }

  void retire_node(Node* n) {
    if (options_.retain_nodes) {
      std::lock_guard lk(registry_mutex_);
      graveyard_.push_back(n);
    } else {
      epochs_.retire(n);
    }
  }

  void publish(Node* n, Side s, detail::ChainPtr c) {
    n->chain(s).publish(std::move(c), epochs_);
    n->version[s == Side::LeftChain ? 0 : 1].fetch_add(1, std::memory_order_relaxed);
  }

  // The last point: the root leaf goes away under the root guard.
  bool erase_root_leaf(Node* u, const Point& p) {
    std::lock_guard rg(root_mutex_);
    lock_left(u);
    const bool valid = root_.load(std::memory_order_acquire) == u && u->is_leaf() &&
                       !u->deleted.load(std::memory_order_acquire) && u->point == p &&
                       u->parent.load(std::memory_order_acquire) == nullptr;
    if (valid) {
      u->deleted.store(true, std::memory_order_release);
      root_.store(nullptr, std::memory_order_release);
    }
    unlock_left(u);
    if (valid) retire_node(u);
    return valid;
  }

  // Recomputes chain `s` of `n` from its children. Returns true if it changed.
  // `from` is the child this merge came up from (or null) and `from_version`
  // the version of that child's chain the merge last saw.
  bool update_side(Node* n, const detail::Links* links, Side s, const Node* from,
                   std::uint64_t from_version, std::uint64_t& version_out) {
    const int si = s == Side::LeftChain ? 0 : 1;
    if (options_.audit_merge_order && from) {
      const int ci = from == links->top ? 0 : (from == links->bottom ? 1 : -1);
      if (ci >= 0) {
        auto& child = n->seen_child[ci][si];
        auto& ver = n->seen_version[ci][si];
        if (child.load(std::memory_order_relaxed) == from->id && ver.load(std::memory_order_relaxed) > from_version)
          counters_.add(detail::StripedCounters::OrderViolations);
        child.store(from->id, std::memory_order_relaxed);
        ver.store(from_version, std::memory_order_relaxed);
      }
    }
    Chain merged = merge_chains(links->top->chain(s).peek(), links->bottom->chain(s).peek());
    const bool changed = !(merged == n->chain(s).peek());
    if (changed) publish(n, s, std::make_shared<const Chain>(std::move(merged)));
    version_out = n->version[si].load(std::memory_order_relaxed);
    return changed;
  }

  // Leaf-to-root recomputation pass starting at `start`, whose structure the
  // caller just changed. Stops early at an ancestor whose chains come out
  // unchanged. Deleted nodes and leaves met on the way are passed through.
  void merge(Node* start) {
    const bool finer = strategy_ == Strategy::Finer;
    const bool coarse = strategy_ == Strategy::Coarse;
    Node* prev = nullptr;
    Node* node = start;
    bool forced = true;
    const Node* from = nullptr;
    std::uint64_t from_version[2] = {0, 0};
    while (node) {
      counters_.add(detail::StripedCounters::MergeSteps);
      lock_left(node);
      if (prev) {
        if (finer) prev->right_lock.unlock();
        else unlock_left(prev);
      }
      const bool deleted = node->deleted.load(std::memory_order_acquire);
      bool live = false;
      bool changed = false;
      std::uint64_t version[2] = {0, 0};
      if (const detail::Links* l = node->links.load(std::memory_order_acquire); l && !deleted) {
        live = true;
        changed |= update_side(node, l, Side::LeftChain, from, from_version[0], version[0]);
      }
      if (finer) {
        lock_right(node);
        unlock_left(node);
      }
      if (live) {
        // Under Finer a delete may turn the node into a leaf between the two
        // halves; it is then passed through like any other leaf.
        if (const detail::Links* l = node->links.load(std::memory_order_acquire))
          changed |= update_side(node, l, Side::RightChain, from, from_version[1], version[1]);
        else
          live = false;
      }
      const bool stop = live && !forced && !changed;
      forced = false;
      from = live ? node : nullptr;
      from_version[0] = version[0];
      from_version[1] = version[1];
      prev = node;
      if (stop) {
        counters_.add(detail::StripedCounters::EarlyStops);
        break;
      }
      node = node->parent.load(std::memory_order_acquire);
    }
    if (prev && !coarse) {
      if (finer) prev->right_lock.unlock();
      else unlock_left(prev);
    }
  }

  template <class F>
  void for_each_node(F&& f) const {
    auto guard = epochs_.pin();
    std::vector<const Node*> stack;
    if (const Node* r = root_.load(std::memory_order_acquire)) stack.push_back(r);
    while (!stack.empty()) {
      const Node* n = stack.back();
      stack.pop_back();
      f(n);
      if (const auto* l = n->links.load(std::memory_order_acquire)) {
        stack.push_back(l->top);
        stack.push_back(l->bottom);
      }
    }
  }

  const Strategy strategy_;
  const HullTreeOptions options_;
  std::atomic<Node*> root_{nullptr};
  std::atomic<std::uint64_t> next_id_{1};
  mutable std::mutex global_mutex_;  // Coarse only
  std::mutex root_mutex_;            // guards replacing root_ by or with null
  mutable detail::StripedCounters counters_;
  mutable std::mutex registry_mutex_;
  std::vector<Node*> registry_;
  std::vector<Node*> graveyard_;
  mutable EpochDomain epochs_;
};

inline TreeAudit HullTree::audit() const {
  TreeAudit a;
  auto guard = epochs_.pin();
  const Node* root = root_.load(std::memory_order_acquire);
  if (!root) return a;
  auto fail = [&a](std::string msg) {
    if (a.ok) {
      a.ok = false;
      a.message = std::move(msg);
    }
  };
  if (root->parent.load() != nullptr) fail("root has a parent");

  struct Frame {
    const Node* node;
    std::size_t depth;
    bool expanded;
    double min_y, max_y;
  };
  // Post-order walk computing subtree y ranges.
  std::vector<Frame> stack{{root, 0, false, 0, 0}};
  std::vector<std::pair<double, double>> ranges;  // results stack
  while (!stack.empty() && a.ok) {
    Frame f = stack.back();
    stack.pop_back();
    const Node* n = f.node;
    const detail::Links* l = n->links.load(std::memory_order_acquire);
    if (!f.expanded) {
      ++a.nodes;
      a.height = std::max(a.height, f.depth);
      if (n->deleted.load()) fail("reachable node is marked deleted");
      if (!l) {
        ++a.leaves;
        const Hull expect = Hull::of_point(n->point);
        if (!(n->left_chain.peek() == expect.left) || !(n->right_chain.peek() == expect.right))
          fail("leaf " + to_string(n->point) + " does not hold singleton chains");
        ranges.emplace_back(n->point.y, n->point.y);
        continue;
      }
      if (!l->top || !l->bottom) fail("internal node with a missing child");
      if (l->top->parent.load() != n || l->bottom->parent.load() != n) fail("child parent pointer mismatch");
      stack.push_back({n, f.depth, true, 0, 0});
      stack.push_back({l->bottom, f.depth + 1, false, 0, 0});
      stack.push_back({l->top, f.depth + 1, false, 0, 0});
      continue;
    }
    // Both children done: the top subtree's range was pushed first.
    const auto bot = ranges.back();
    ranges.pop_back();
    const auto top = ranges.back();
    ranges.pop_back();
    if (!(top.first >= l->key && l->key > bot.second))
      fail("routing key " + std::to_string(l->key) + " does not separate its subtrees");
    for (Side s : {Side::LeftChain, Side::RightChain}) {
      const Chain& c = n->chain(s).peek();
      if (auto why = chain_violation(c)) fail(*why);
      if (!(c == merge_chains(l->top->chain(s).peek(), l->bottom->chain(s).peek())))
        fail(std::string(to_string(s)) + " chain differs from the conquer of its children");
    }
    ranges.emplace_back(bot.first, top.second);
  }
  return a;
}

}  // namespace dynhull
