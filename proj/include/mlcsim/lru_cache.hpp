#pragma once

#include <cstddef>
#include <list>
#include <optional>
#include <unordered_map>

namespace mlc {

/// Bounded map with least-recently-used eviction. A lookup hit refreshes
/// recency; insert of an existing key overwrites and refreshes. Capacity 0 is
/// legal and behaves as a cache that never holds anything.
template <typename K, typename V>
class LruCache {
  public:
    explicit LruCache(std::size_t capacity = 0) : capacity_(capacity) {}

    // index_ stores iterators into order_, so copies must rebuild it.
    LruCache(const LruCache& other) : capacity_(other.capacity_), order_(other.order_) {
        reindex();
    }
    LruCache& operator=(const LruCache& other) {
        if (this != &other) {
            capacity_ = other.capacity_;
            order_ = other.order_;
            reindex();
        }
        return *this;
    }
    LruCache(LruCache&&) noexcept = default;
    LruCache& operator=(LruCache&&) noexcept = default;

    std::optional<V> lookup(const K& key) {
        auto it = index_.find(key);
        if (it == index_.end()) return std::nullopt;
        order_.splice(order_.begin(), order_, it->second);
        return it->second->second;
    }

    void insert(const K& key, const V& value) {
        if (capacity_ == 0) return;
        auto it = index_.find(key);
        if (it != index_.end()) {
            it->second->second = value;
            order_.splice(order_.begin(), order_, it->second);
            return;
        }
        if (order_.size() == capacity_) {
            index_.erase(order_.back().first);
            order_.pop_back();
        }
        order_.emplace_front(key, value);
        index_[key] = order_.begin();
    }

    void erase(const K& key) {
        auto it = index_.find(key);
        if (it == index_.end()) return;
        order_.erase(it->second);
        index_.erase(it);
    }

    /// Non-refreshing probe, for tests and diagnostics.
    bool contains(const K& key) const { return index_.count(key) != 0; }

    std::size_t size() const { return order_.size(); }
    std::size_t capacity() const { return capacity_; }

  private:
    void reindex() {
        index_.clear();
        for (auto it = order_.begin(); it != order_.end(); ++it) index_[it->first] = it;
    }

    std::size_t capacity_;
    std::list<std::pair<K, V>> order_;  // front = most recent
    std::unordered_map<K, typename std::list<std::pair<K, V>>::iterator> index_;
};

}  // namespace mlc
