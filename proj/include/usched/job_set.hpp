#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <ostream>
#include <vector>

#ifndef USCHED_MAX_JOBS
#define USCHED_MAX_JOBS 256
#endif

namespace usched {

using JobId = std::size_t;

/// Largest number of jobs any graph may hold (including an added
/// super-source). Override with -DUSCHED_MAX_JOBS=<multiple of 64>.
inline constexpr std::size_t kMaxJobs = USCHED_MAX_JOBS;
static_assert(kMaxJobs % 64 == 0 && kMaxJobs > 0,
              "USCHED_MAX_JOBS must be a positive multiple of 64");

/// Dense fixed-width set of job IDs in [0, kMaxJobs).
class JobSet {
public:
  static constexpr std::size_t kWords = kMaxJobs / 64;
  static constexpr std::size_t capacity = kMaxJobs;

  class iterator {
  public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = JobId;
    using difference_type = std::ptrdiff_t;
    using pointer = const JobId *;
    using reference = JobId;

    iterator() = default;
    iterator(const JobSet *set, std::size_t word, std::uint64_t rest)
        : set_(set), word_(word), rest_(rest) {
      settle();
    }

    JobId operator*() const {
      return word_ * 64 + static_cast<std::size_t>(std::countr_zero(rest_));
    }
    iterator &operator++() {
      rest_ &= rest_ - 1;
      settle();
      return *this;
    }
    iterator operator++(int) {
      iterator copy = *this;
      ++*this;
      return copy;
    }
    bool operator==(const iterator &o) const {
      return word_ == o.word_ && rest_ == o.rest_;
    }

  private:
    void settle() {
      while (rest_ == 0 && word_ + 1 < kWords) {
        ++word_;
        rest_ = set_->words_[word_];
      }
      if (rest_ == 0)
        word_ = kWords;
    }

    const JobSet *set_ = nullptr;
    std::size_t word_ = kWords;
    std::uint64_t rest_ = 0;
  };

  constexpr JobSet() = default;
  JobSet(std::initializer_list<JobId> jobs) {
    for (JobId v : jobs)
      insert(v);
  }

  static JobSet single(JobId v) {
    JobSet s;
    s.insert(v);
    return s;
  }

  /// {0, 1, ..., n-1}
  static JobSet prefix(std::size_t n) {
    JobSet s;
    for (std::size_t w = 0; w < kWords && n > 0; ++w) {
      if (n >= 64) {
        s.words_[w] = ~std::uint64_t{0};
        n -= 64;
      } else {
        s.words_[w] = (std::uint64_t{1} << n) - 1;
        n = 0;
      }
    }
    return s;
  }

  void insert(JobId v) { words_[v >> 6] |= bit(v); }
  void erase(JobId v) { words_[v >> 6] &= ~bit(v); }
  bool contains(JobId v) const {
    return v < capacity && (words_[v >> 6] & bit(v)) != 0;
  }

  std::size_t size() const {
    std::size_t c = 0;
    for (auto w : words_)
      c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const {
    for (auto w : words_)
      if (w != 0)
        return false;
    return true;
  }

  /// Smallest member; capacity if empty.
  JobId first() const {
    for (std::size_t w = 0; w < kWords; ++w)
      if (words_[w] != 0)
        return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return capacity;
  }

  bool is_subset_of(const JobSet &o) const {
    for (std::size_t w = 0; w < kWords; ++w)
      if ((words_[w] & ~o.words_[w]) != 0)
        return false;
    return true;
  }
  bool intersects(const JobSet &o) const {
    for (std::size_t w = 0; w < kWords; ++w)
      if ((words_[w] & o.words_[w]) != 0)
        return true;
    return false;
  }

  JobSet &operator|=(const JobSet &o) {
    for (std::size_t w = 0; w < kWords; ++w)
      words_[w] |= o.words_[w];
    return *this;
  }
  JobSet &operator&=(const JobSet &o) {
    for (std::size_t w = 0; w < kWords; ++w)
      words_[w] &= o.words_[w];
    return *this;
  }
  /// Set difference.
  JobSet &operator-=(const JobSet &o) {
    for (std::size_t w = 0; w < kWords; ++w)
      words_[w] &= ~o.words_[w];
    return *this;
  }
  JobSet &operator^=(const JobSet &o) {
    for (std::size_t w = 0; w < kWords; ++w)
      words_[w] ^= o.words_[w];
    return *this;
  }

  friend JobSet operator|(JobSet a, const JobSet &b) { return a |= b; }
  friend JobSet operator&(JobSet a, const JobSet &b) { return a &= b; }
  friend JobSet operator-(JobSet a, const JobSet &b) { return a -= b; }
  friend JobSet operator^(JobSet a, const JobSet &b) { return a ^= b; }

  friend bool operator==(const JobSet &, const JobSet &) = default;
  /// Total order: the set holding the smallest job of the symmetric
  /// difference sorts first.
  friend std::strong_ordering operator<=>(const JobSet &a, const JobSet &b) {
    for (std::size_t w = 0; w < kWords; ++w) {
      if (a.words_[w] == b.words_[w])
        continue;
      std::uint64_t diff = a.words_[w] ^ b.words_[w];
      std::uint64_t low = diff & (~diff + 1);
      return (a.words_[w] & low) != 0 ? std::strong_ordering::less
                                      : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
  }

  iterator begin() const { return iterator(this, 0, words_[0]); }
  iterator end() const { return iterator(this, kWords, 0); }

  std::vector<JobId> to_vector() const {
    std::vector<JobId> out;
    out.reserve(size());
    for (JobId v : *this)
      out.push_back(v);
    return out;
  }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (auto w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xbf58476d1ce4e5b9ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 31));
  }

  const std::array<std::uint64_t, kWords> &words() const { return words_; }

private:
  static constexpr std::uint64_t bit(JobId v) {
    return std::uint64_t{1} << (v & 63);
  }

  std::array<std::uint64_t, kWords> words_{};
};

inline std::ostream &operator<<(std::ostream &os, const JobSet &s) {
  os << '{';
  bool first = true;
  for (JobId v : s) {
    if (!first)
      os << ',';
    os << v;
    first = false;
  }
  return os << '}';
}

struct JobSetHash {
  std::size_t operator()(const JobSet &s) const noexcept { return s.hash(); }
};

} // namespace usched

template <> struct std::hash<usched::JobSet> {
  std::size_t operator()(const usched::JobSet &s) const noexcept {
    return s.hash();
  }
};
