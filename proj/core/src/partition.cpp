#include "clustsum/partition.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace clustsum {

Partition::Partition(std::vector<Label> canonical) : labels_(std::move(canonical)) {
  for (Label l : labels_) {
    if (static_cast<std::size_t>(l) == sizes_.size()) sizes_.push_back(0);
    ++sizes_[l];
  }
}

Partition Partition::from_labels(std::span<const Label> raw) {
  return canonicalize(raw);
}

Partition Partition::one(std::size_t n) {
  if (n == 0) throw Error("empty partition");
  return Partition(std::vector<Label>(n, 0));
}

Partition Partition::zero(std::size_t n) {
  if (n == 0) throw Error("empty partition");
  std::vector<Label> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  return Partition(std::move(labels));
}

std::vector<std::vector<std::size_t>> Partition::clusters() const {
  std::vector<std::vector<std::size_t>> out(sizes_.size());
  for (std::size_t j = 0; j < sizes_.size(); ++j) out[j].reserve(sizes_[j]);
  for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
  return out;
}

std::size_t PartitionHash::operator()(const Partition& p) const noexcept {
  // FNV-1a over the label sequence.
  std::uint64_t h = 1469598103934665603ULL;
  for (Label l : p.labels()) {
    h ^= static_cast<std::uint64_t>(l) + 0x9e3779b97f4a7c15ULL;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

void require_same_size(const Partition& c, const Partition& d) {
  if (c.size() != d.size()) {
    throw Error("partition size mismatch: " + std::to_string(c.size()) +
                " vs " + std::to_string(d.size()));
  }
}

ContingencyTable contingency(const Partition& c, const Partition& d) {
  require_same_size(c, d);
  ContingencyTable t;
  t.rows = c.num_clusters();
  t.cols = d.num_clusters();
  t.counts.assign(static_cast<std::size_t>(t.rows) * t.cols, 0);
  for (std::size_t n = 0; n < c.size(); ++n) {
    ++t.counts[static_cast<std::size_t>(c[n]) * t.cols + d[n]];
  }
  t.row_sums.assign(c.sizes().begin(), c.sizes().end());
  t.col_sums.assign(d.sizes().begin(), d.sizes().end());
  t.total = static_cast<std::int64_t>(c.size());
  return t;
}

Partition meet(const Partition& c, const Partition& d) {
  require_same_size(c, d);
  const auto width = static_cast<std::int64_t>(d.num_clusters());
  std::vector<std::int64_t> keys(c.size());
  for (std::size_t n = 0; n < c.size(); ++n) keys[n] = c[n] * width + d[n];
  return canonicalize(keys);
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

void link_clusters(const Partition& p, UnionFind& uf) {
  std::vector<std::size_t> first(p.num_clusters(), p.size());
  for (std::size_t n = 0; n < p.size(); ++n) {
    auto& f = first[p[n]];
    if (f == p.size()) {
      f = n;
    } else {
      uf.unite(f, n);
    }
  }
}

}  // namespace

Partition join(const Partition& c, const Partition& d) {
  require_same_size(c, d);
  UnionFind uf(c.size());
  link_clusters(c, uf);
  link_clusters(d, uf);
  std::vector<std::size_t> roots(c.size());
  for (std::size_t n = 0; n < c.size(); ++n) roots[n] = uf.find(n);
  return canonicalize(roots);
}

bool leq(const Partition& c, const Partition& d) {
  require_same_size(c, d);
  std::vector<Label> target(c.num_clusters(), -1);
  for (std::size_t n = 0; n < c.size(); ++n) {
    Label& t = target[c[n]];
    if (t == -1) {
      t = d[n];
    } else if (t != d[n]) {
      return false;
    }
  }
  return true;
}

bool covers(const Partition& d, const Partition& c) {
  require_same_size(d, c);
  return d.num_clusters() + 1 == c.num_clusters() && leq(c, d);
}

PartitionEnumerator::PartitionEnumerator(std::size_t n, std::size_t cap) {
  if (n == 0) throw Error("empty partition");
  if (n > cap) {
    throw Error("enumeration too large: N=" + std::to_string(n) +
                " exceeds cap " + std::to_string(cap));
  }
  current_.assign(n, 0);
  prefix_max_.assign(n, 0);
}

std::optional<Partition> PartitionEnumerator::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    return Partition(current_);
  }
  // prefix_max_[i] holds max(current_[0..i]).
  const std::size_t n = current_.size();
  std::size_t i = n;
  while (i-- > 1) {
    if (current_[i] <= prefix_max_[i - 1]) {
      ++current_[i];
      prefix_max_[i] = std::max(prefix_max_[i - 1], current_[i]);
      for (std::size_t j = i + 1; j < n; ++j) {
        current_[j] = 0;
        prefix_max_[j] = prefix_max_[i];
      }
      return Partition(current_);
    }
  }
  done_ = true;
  return std::nullopt;
}

std::vector<Partition> enumerate_partitions(std::size_t n, std::size_t cap) {
  PartitionEnumerator e(n, cap);
  std::vector<Partition> out;
  while (auto p = e.next()) out.push_back(std::move(*p));
  return out;
}

}  // namespace clustsum
