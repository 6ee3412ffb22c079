#include "dynreach/io.hpp"

#include <charconv>
#include <map>
#include <optional>
#include <sstream>

namespace dynreach {

namespace {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    std::istringstream words(text);
    Line line{number, {}};
    for (std::string word; words >> word;) line.tokens.push_back(word);
    if (line.tokens.empty() || line.tokens.front().starts_with('#')) continue;
    lines.push_back(std::move(line));
  }
  return lines;
}

long long parse_int(const Line& line, const std::string& token) {
  long long value = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ParseError(line.number, "expected an integer, got '" + token + "'");
  return value;
}

Node parse_node(const Line& line, const std::string& token, std::size_t n) {
  const long long value = parse_int(line, token);
  if (value < 0 || static_cast<std::size_t>(value) >= n) {
    throw ParseError(line.number, "node " + token + " outside 0.." + std::to_string(n == 0 ? 0 : n - 1));
  }
  return static_cast<Node>(value);
}

void expect_arity(const Line& line, std::size_t count) {
  if (line.tokens.size() != count) {
    throw ParseError(line.number, "'" + line.tokens.front() + "' takes " + std::to_string(count - 1) + " fields");
  }
}

}  // namespace

Graph read_graph(std::istream& in) {
  const std::vector<Line> lines = tokenize(in);
  if (lines.empty()) throw ParseError(0, "missing 'n' header");
  const Line& header = lines.front();
  if (header.tokens.front() != "n") throw ParseError(header.number, "expected 'n <count> <directed|undirected>'");
  expect_arity(header, 3);
  const long long n = parse_int(header, header.tokens[1]);
  if (n <= 0) throw ParseError(header.number, "node count must be positive");
  Directedness kind;
  if (header.tokens[2] == "directed") {
    kind = Directedness::kDirected;
  } else if (header.tokens[2] == "undirected") {
    kind = Directedness::kUndirected;
  } else {
    throw ParseError(header.number, "unknown directedness '" + header.tokens[2] + "'");
  }
  Graph g(static_cast<std::size_t>(n), kind);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.tokens.front() != "e") throw ParseError(line.number, "expected 'e <u> <v>'");
    expect_arity(line, 3);
    const Node u = parse_node(line, line.tokens[1], g.node_count());
    const Node v = parse_node(line, line.tokens[2], g.node_count());
    if (u == v) throw ParseError(line.number, "self-loop");
    if (g.has_edge(u, v)) throw ParseError(line.number, "duplicate edge");
    g.add_edge(u, v);
  }
  return g;
}

void write_graph(std::ostream& out, const Graph& g) {
  out << "n " << g.node_count() << ' ' << (g.directed() ? "directed" : "undirected") << '\n';
  for (Edge e : g.canonical_edges()) out << "e " << e.from << ' ' << e.to << '\n';
}

TreeDecomposition read_decomposition(std::istream& in) {
  const std::vector<Line> lines = tokenize(in);
  std::map<long long, int> index;
  std::vector<std::pair<long long, const Line*>> parents;
  for (const Line& line : lines) {
    if (line.tokens.front() != "t") continue;
    expect_arity(line, 3);
    const long long id = parse_int(line, line.tokens[1]);
    if (!index.emplace(id, static_cast<int>(index.size())).second) {
      throw ParseError(line.number, "duplicate tree node " + line.tokens[1]);
    }
    parents.push_back({parse_int(line, line.tokens[2]), &line});
  }
  TreeDecomposition t;
  t.parent.resize(index.size());
  t.bags.resize(index.size());
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const auto& [pid, line] = parents[i];
    if (pid == -1) {
      t.parent[i] = -1;
      continue;
    }
    auto it = index.find(pid);
    if (it == index.end()) throw ParseError(line->number, "unknown parent " + std::to_string(pid));
    t.parent[i] = it->second;
  }
  std::vector<bool> seen(index.size());
  for (const Line& line : lines) {
    if (line.tokens.front() == "t") continue;
    if (line.tokens.front() != "b" || line.tokens.size() < 2) throw ParseError(line.number, "expected 'b <id> <v>...'");
    auto it = index.find(parse_int(line, line.tokens[1]));
    if (it == index.end()) throw ParseError(line.number, "bag for unknown tree node " + line.tokens[1]);
    const auto i = static_cast<std::size_t>(it->second);
    if (seen[i]) throw ParseError(line.number, "second bag for tree node " + line.tokens[1]);
    seen[i] = true;
    for (std::size_t k = 2; k < line.tokens.size(); ++k) {
      const long long v = parse_int(line, line.tokens[k]);
      if (v < 0) throw ParseError(line.number, "negative node id");
      t.bags[i].push_back(static_cast<Node>(v));
    }
    std::sort(t.bags[i].begin(), t.bags[i].end());
    if (std::adjacent_find(t.bags[i].begin(), t.bags[i].end()) != t.bags[i].end()) {
      throw ParseError(line.number, "repeated node in bag");
    }
  }
  return t;
}

void write_decomposition(std::ostream& out, const TreeDecomposition& t) {
  for (std::size_t i = 0; i < t.tree_size(); ++i) out << "t " << i << ' ' << t.parent[i] << '\n';
  for (std::size_t i = 0; i < t.tree_size(); ++i) {
    out << "b " << i;
    for (Node v : t.bags[i]) out << ' ' << v;
    out << '\n';
  }
}

std::vector<BulkChange> read_change_script(std::istream& in) {
  std::vector<BulkChange> script;
  std::optional<BulkChange> open;
  std::size_t last_line = 0;
  auto endpoint = [](const Line& line, const std::string& token) {
    const long long v = parse_int(line, token);
    if (v < 0) throw ParseError(line.number, "negative node id");
    return static_cast<Node>(v);
  };
  for (const Line& line : tokenize(in)) {
    last_line = line.number;
    const std::string& head = line.tokens.front();
    if (head == "change") {
      expect_arity(line, 1);
      if (open) throw ParseError(line.number, "nested 'change'");
      open.emplace();
    } else if (head == "end") {
      expect_arity(line, 1);
      if (!open) throw ParseError(line.number, "'end' without 'change'");
      script.push_back(std::move(*open));
      open.reset();
    } else if (head == "+" || head == "-") {
      if (!open) throw ParseError(line.number, "edge outside a change block");
      expect_arity(line, 3);
      const Edge e{endpoint(line, line.tokens[1]), endpoint(line, line.tokens[2])};
      if (e.from == e.to) throw ParseError(line.number, "self-loop");
      (head == "+" ? open->inserted : open->deleted).insert(e);
    } else {
      throw ParseError(line.number, "unexpected '" + head + "'");
    }
  }
  if (open) throw ParseError(last_line, "unterminated change block");
  return script;
}

void write_change_script(std::ostream& out, const std::vector<BulkChange>& script) {
  for (const BulkChange& c : script) {
    out << "change\n";
    for (Edge e : c.inserted) out << "+ " << e.from << ' ' << e.to << '\n';
    for (Edge e : c.deleted) out << "- " << e.from << ' ' << e.to << '\n';
    out << "end\n";
  }
}

WeightAssignment read_weights(std::istream& in, bool skew_complete) {
  WeightAssignment w;
  for (const Line& line : tokenize(in)) {
    if (line.tokens.front() != "w") throw ParseError(line.number, "expected 'w <u> <v> <integer>'");
    expect_arity(line, 4);
    const long long u = parse_int(line, line.tokens[1]);
    const long long v = parse_int(line, line.tokens[2]);
    if (u < 0 || v < 0) throw ParseError(line.number, "negative node id");
    if (u == v) throw ParseError(line.number, "self-loop");
    BigInt value;
    try {
      value = BigInt(line.tokens[3]);
    } catch (const std::exception&) {
      throw ParseError(line.number, "expected an integer weight, got '" + line.tokens[3] + "'");
    }
    const Edge e{static_cast<Node>(u), static_cast<Node>(v)};
    if (w.contains(e)) throw ParseError(line.number, "duplicate weight for " + to_string(e));
    w.set(e, value);
  }
  if (skew_complete) {
    const auto listed = w.weights;
    for (const auto& [e, value] : listed) {
      if (!w.contains(e.reversed())) w.set(e.reversed(), -value);
    }
    w.skew_symmetric = w.check_skew_symmetry();
  }
  return w;
}

void write_weights(std::ostream& out, const WeightAssignment& w, bool forward_only) {
  for (const auto& [e, value] : w.weights) {
    if (forward_only && e.from > e.to) continue;
    out << "w " << e.from << ' ' << e.to << ' ' << value << '\n';
  }
}

}  // namespace dynreach
