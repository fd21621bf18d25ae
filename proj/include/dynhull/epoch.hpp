#pragma once

// Epoch-based memory reclamation for objects reachable by lock-free readers.
//
// A thread pins the domain for the duration of an operation. Objects unlinked
// during epoch e are freed once the global epoch reaches e + 2, which requires
// every pinned thread to have observed e + 1.

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>
#include <type_traits>

namespace dynhull {

class EpochDomain {
 public:
  static constexpr std::size_t kSlots = 256;

  class Guard {
   public:
    Guard(Guard&& o) noexcept : domain_(o.domain_), slot_(o.slot_) { o.domain_ = nullptr; }
    Guard(const Guard&) = delete;
    Guard& operator=(const Guard&) = delete;
    Guard& operator=(Guard&&) = delete;
    ~Guard() {
      if (domain_) domain_->slots_[slot_].word.store(0, std::memory_order_release);
    }

   private:
    friend class EpochDomain;
    Guard(EpochDomain* d, std::size_t s) : domain_(d), slot_(s) {}
    EpochDomain* domain_;
    std::size_t slot_;
  };

  EpochDomain() = default;
  EpochDomain(const EpochDomain&) = delete;
  EpochDomain& operator=(const EpochDomain&) = delete;

  /// Frees everything still in limbo. No thread may be pinned.
  ~EpochDomain() {
    for (auto& r : limbo_) r.deleter(r.ptr);
  }

  Guard pin() {
    const std::size_t start = std::hash<std::thread::id>{}(std::this_thread::get_id()) % kSlots;
    for (;;) {
      for (std::size_t k = 0; k < kSlots; ++k) {
        const std::size_t idx = (start + k) % kSlots;
        std::uint64_t expected = 0;
        const std::uint64_t word = (epoch_.load(std::memory_order_seq_cst) << 1) | 1;
        if (slots_[idx].word.load(std::memory_order_relaxed) == 0 &&
            slots_[idx].word.compare_exchange_strong(expected, word, std::memory_order_seq_cst))
          return Guard(this, idx);
      }
      std::this_thread::yield();
    }
  }

  /// Schedules `deleter(ptr)` for when no pinned thread can still hold `ptr`.
  /// The object must already be unreachable for newly pinned threads.
  void retire(void* ptr, void (*deleter)(void*)) {
    std::lock_guard lk(limbo_mutex_);
    limbo_.push_back({epoch_.load(std::memory_order_seq_cst), ptr, deleter});
    if (++since_collect_ >= kCollectEvery) {
      since_collect_ = 0;
      try_advance();
      collect();
    }
  }

  template <class T>
  void retire(T* ptr) {
    retire(static_cast<void*>(const_cast<std::remove_const_t<T>*>(ptr)),
           [](void* p) { delete static_cast<T*>(p); });
  }

  std::size_t pending() const {
    std::lock_guard lk(limbo_mutex_);
    return limbo_.size();
  }

  std::uint64_t epoch() const { return epoch_.load(std::memory_order_relaxed); }

 private:
  static constexpr std::size_t kCollectEvery = 64;

  struct alignas(64) Slot {
    std::atomic<std::uint64_t> word{0};  // 0 = free, otherwise (epoch << 1) | 1
  };

  struct Retired {
    std::uint64_t epoch;
    void* ptr;
    void (*deleter)(void*);
  };

  void try_advance() {
    const std::uint64_t e = epoch_.load(std::memory_order_seq_cst);
    for (const auto& s : slots_) {
      const std::uint64_t w = s.word.load(std::memory_order_seq_cst);
      if ((w & 1) && (w >> 1) != e) return;
    }
    std::uint64_t expected = e;
    epoch_.compare_exchange_strong(expected, e + 1, std::memory_order_seq_cst);
  }

  void collect() {
    const std::uint64_t e = epoch_.load(std::memory_order_seq_cst);
    while (!limbo_.empty() && limbo_.front().epoch + 2 <= e) {
      limbo_.front().deleter(limbo_.front().ptr);
      limbo_.pop_front();
    }
  }

  std::array<Slot, kSlots> slots_{};
  alignas(64) std::atomic<std::uint64_t> epoch_{1};
  mutable std::mutex limbo_mutex_;
  std::deque<Retired> limbo_;
  std::size_t since_collect_ = 0;
};

}  // namespace dynhull
