#include "dynreach/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace dynreach {

namespace {

std::vector<Node> shuffled_ids(std::size_t n, std::mt19937_64& rng) {
  std::vector<Node> ids(n);
  std::iota(ids.begin(), ids.end(), Node{0});
  std::shuffle(ids.begin(), ids.end(), rng);
  return ids;
}

}  // namespace

Graph random_gnp(std::size_t n, double p, std::uint64_t seed, Directedness kind) {
  if (n == 0) throw PreconditionError("node count must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  Graph g(n, kind);
  for (Node u = 0; u < n; ++u) {
    for (Node v = 0; v < n; ++v) {
      if (u == v || (kind == Directedness::kUndirected && v < u)) continue;
      if (coin(rng)) g.add_edge(u, v);
    }
  }
  return g;
}

Graph path_union(std::size_t q, std::size_t length, std::uint64_t seed) {
  if (q == 0 || length == 0) throw PreconditionError("path count and length must be positive");
  std::mt19937_64 rng(seed);
  const std::vector<Node> ids = shuffled_ids(q * length, rng);
  Graph g(q * length);
  for (std::size_t path = 0; path < q; ++path) {
    for (std::size_t i = 0; i + 1 < length; ++i) g.add_edge(ids[path * length + i], ids[path * length + i + 1]);
  }
  return g;
}

GeneratedInstance partial_k_tree(std::size_t n, std::size_t k, std::uint64_t seed,
                                 const PartialKTreeOptions& options) {
  if (n == 0) throw PreconditionError("node count must be positive");
  if (!(options.edge_probability >= 0.0 && options.edge_probability <= 1.0)) {
    throw PreconditionError("edge probability must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  TreeDecomposition t;
  Node next_fresh = 0;

  struct Pending {
    int parent;
    std::size_t count;
  };
  std::vector<Pending> queue{{-1, n}};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Pending job = queue[head];
    std::vector<Node> bag;
    if (job.parent != -1) {
      std::vector<Node> pool = t.bags[static_cast<std::size_t>(job.parent)];
      std::shuffle(pool.begin(), pool.end(), rng);
      const std::size_t most = std::min(k, pool.size());
      const std::size_t least = std::min<std::size_t>(1, most);
      std::uniform_int_distribution<std::size_t> keep(least, most);
      pool.resize(keep(rng));
      bag = pool;
    }
    const std::size_t fresh = std::min(job.count, k + 1 - bag.size());
    for (std::size_t i = 0; i < fresh; ++i) bag.push_back(next_fresh++);
    std::sort(bag.begin(), bag.end());
    const int id = static_cast<int>(t.tree_size());
    t.parent.push_back(job.parent);
    t.bags.push_back(bag);
    const std::size_t rest = job.count - fresh;
    if (rest == 0) continue;
    const std::size_t left = (rest + 1) / 2;
    queue.push_back({id, left});
    if (rest - left > 0) queue.push_back({id, rest - left});
  }

  Graph g(n, options.kind);
  std::bernoulli_distribution coin(options.edge_probability);
  std::bernoulli_distribution flip(0.5);
  std::vector<std::size_t> degree(n);
  for (const std::vector<Node>& bag : t.bags) {
    for (std::size_t i = 0; i < bag.size(); ++i) {
      for (std::size_t j = i + 1; j < bag.size(); ++j) {
        const Node u = bag[i];
        const Node v = bag[j];
        const bool drawn = coin(rng);
        const bool reverse = flip(rng);
        if (!drawn || g.has_edge(u, v) || g.has_edge(v, u)) continue;
        if (options.max_degree != 0 && (degree[u] >= options.max_degree || degree[v] >= options.max_degree)) {
          continue;
        }
        if (reverse && options.kind == Directedness::kDirected) {
          g.add_edge(v, u);
        } else {
          g.add_edge(u, v);
        }
        ++degree[u];
        ++degree[v];
      }
    }
  }

  const std::vector<Node> ids = shuffled_ids(n, rng);
  GeneratedInstance out{Graph(n, options.kind), t};
  for (Edge e : g.canonical_edges()) out.graph.add_edge(ids[e.from], ids[e.to]);
  for (std::vector<Node>& bag : out.decomposition.bags) {
    for (Node& v : bag) v = ids[v];
    std::sort(bag.begin(), bag.end());
  }
  return out;
}

std::vector<BulkChange> random_change_script(const Graph& g, std::uint64_t seed, const ScriptOptions& options) {
  if (options.max_batch == 0) throw PreconditionError("batch size must be positive");
  const std::size_t n = g.node_count();
  if (n < 2) throw PreconditionError("change scripts need at least two nodes");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> batch(1, options.max_batch);
  std::uniform_int_distribution<Node> node(0, static_cast<Node>(n - 1));
  std::bernoulli_distribution deletion(options.delete_probability);

  Graph current = g;
  std::vector<BulkChange> script;
  for (std::size_t step = 0; step < options.steps; ++step) {
    BulkChange change;
    const std::size_t size = batch(rng);
    std::vector<Edge> present = current.canonical_edges();
    for (std::size_t edit = 0; edit < size; ++edit) {
      const bool remove = deletion(rng);
      if (remove) {
        std::vector<Edge> options_left;
        for (Edge e : present) {
          if (!change.deleted.contains(e)) options_left.push_back(e);
        }
        if (!options_left.empty()) {
          std::uniform_int_distribution<std::size_t> pick(0, options_left.size() - 1);
          change.deleted.insert(options_left[pick(rng)]);
          continue;
        }
      }
      for (int attempt = 0; attempt < 64; ++attempt) {
        Node u = node(rng);
        Node v = node(rng);
        if (u == v) continue;
        if (!current.directed() && u > v) std::swap(u, v);
        const Edge e{u, v};
        if (current.has_edge(e) || change.inserted.contains(e)) continue;
        change.inserted.insert(e);
        break;
      }
    }
    current = apply_change(current, change);
    script.push_back(std::move(change));
  }
  return script;
}

}  // namespace dynreach
