#include "optresp/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace optresp {

namespace {

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view line) : rest_(line) {}

  std::optional<std::string_view> next() {
    const auto start = rest_.find_first_not_of(" \t\r");
    if (start == std::string_view::npos) return std::nullopt;
    rest_.remove_prefix(start);
    const auto end = rest_.find_first_of(" \t\r");
    auto token = rest_.substr(0, end);
    rest_.remove_prefix(end == std::string_view::npos ? rest_.size() : end);
    return token;
  }

 private:
  std::string_view rest_;
};

template <typename T>
T parse_number(std::string_view token, std::size_t line, const char* what) {
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw LoadError("cannot parse " + std::string(what) + " '" + std::string(token) + "'", line);
  }
  return value;
}

bool is_blank_or_comment(std::string_view line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string_view::npos || line[pos] == '#';
}

std::optional<std::size_t> nodes_directive(std::string_view line) {
  Tokenizer tok(line);
  auto hash = tok.next();
  if (!hash || *hash != "#") return std::nullopt;
  auto key = tok.next();
  if (!key || *key != "nodes") return std::nullopt;
  auto count = tok.next();
  if (!count) return std::nullopt;
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(count->data(), count->data() + count->size(), n);
  if (ec != std::errc() || ptr != count->data() + count->size()) return std::nullopt;
  return n;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

EdgeListFile parse_edge_list(std::istream& in, bool /*directed_input*/) {
  struct RawEdge {
    std::int64_t u, v;
    double w;
  };
  std::vector<RawEdge> raw;
  std::optional<std::size_t> declared_nodes;
  std::string line;
  std::size_t lineno = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank_or_comment(line)) {
      if (!seen_data && !declared_nodes) declared_nodes = nodes_directive(line);
      continue;
    }
    seen_data = true;
    Tokenizer tok(line);
    auto a = tok.next();
    auto b = tok.next();
    if (!a || !b) throw LoadError("expected 'i j [w]'", lineno);
    RawEdge e{parse_number<std::int64_t>(*a, lineno, "node id"),
              parse_number<std::int64_t>(*b, lineno, "node id"), 1.0};
    if (auto w = tok.next()) e.w = parse_number<double>(*w, lineno, "weight");
    if (tok.next()) throw LoadError("too many fields, expected 'i j [w]'", lineno);
    if (e.u < 0 || e.v < 0) throw LoadError("negative node id", lineno);
    if (!(e.w >= 0.0)) throw ValidationError("negative weight on line " + std::to_string(lineno));
    if (e.w == 0.0) throw ValidationError("zero weight on line " + std::to_string(lineno));
    raw.push_back(e);
  }

  EdgeListFile out;
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  if (declared_nodes) {
    const auto n = static_cast<std::int64_t>(*declared_nodes);
    for (const RawEdge& e : raw) {
      if (e.u >= n || e.v >= n) {
        throw LoadError("node id exceeds declared node count " + std::to_string(n));
      }
      edges.push_back({static_cast<NodeId>(e.u), static_cast<NodeId>(e.v), e.w});
    }
    out.original_ids.resize(*declared_nodes);
    for (std::size_t i = 0; i < *declared_nodes; ++i) out.original_ids[i] = static_cast<std::int64_t>(i);
  } else {
    std::vector<std::int64_t> ids;
    ids.reserve(2 * raw.size());
    for (const RawEdge& e : raw) {
      ids.push_back(e.u);
      ids.push_back(e.v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    auto index_of = [&ids](std::int64_t id) {
      return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    for (const RawEdge& e : raw) edges.push_back({index_of(e.u), index_of(e.v), e.w});
    out.original_ids = std::move(ids);
  }
  out.graph = WeightedGraph(out.original_ids.size(), edges);
  out.self_loops_dropped = out.graph.self_loops_dropped();
  return out;
}

EdgeListFile load_edge_list(const std::filesystem::path& path, bool directed_input) {
  auto in = open_input(path);
  return parse_edge_list(in, directed_input);
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  out << "# nodes " << g.num_nodes() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << ' ' << format_double(e.w) << '\n';
}

void save_edge_list(const std::filesystem::path& path, const WeightedGraph& g) {
  auto out = open_output(path);
  write_edge_list(out, g);
  if (!out) throw LoadError("write failed for '" + path.string() + "'");
}

NodeAttributes parse_attributes(std::istream& in, std::size_t num_nodes) {
  NodeAttributes attrs;
  attrs.phi.assign(num_nodes, 0.0);
  attrs.b.assign(num_nodes, 0.0);
  attrs.a.assign(num_nodes, 0.0);
  std::vector<bool> seen(num_nodes, false);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank_or_comment(line)) continue;
    Tokenizer tok(line);
    auto id_tok = tok.next();
    auto phi_tok = tok.next();
    auto b_tok = tok.next();
    if (!id_tok || !phi_tok || !b_tok) throw LoadError("expected 'id phi b [a]'", lineno);
    const auto id = parse_number<std::int64_t>(*id_tok, lineno, "node id");
    if (id < 0 || static_cast<std::size_t>(id) >= num_nodes) {
      throw LoadError("node id " + std::to_string(id) + " out of range", lineno);
    }
    const auto i = static_cast<std::size_t>(id);
    if (seen[i]) throw LoadError("duplicate node id " + std::to_string(id), lineno);
    seen[i] = true;
    attrs.phi[i] = parse_number<double>(*phi_tok, lineno, "phi");
    attrs.b[i] = parse_number<double>(*b_tok, lineno, "b");
    if (auto a_tok = tok.next()) attrs.a[i] = parse_number<double>(*a_tok, lineno, "a");
    if (tok.next()) throw LoadError("too many fields, expected 'id phi b [a]'", lineno);
  }
  for (std::size_t i = 0; i < num_nodes; ++i) {
    if (!seen[i]) throw LoadError("attribute file has no entry for node " + std::to_string(i));
  }
  return attrs;
}

NodeAttributes load_attributes(const std::filesystem::path& path, std::size_t num_nodes) {
  auto in = open_input(path);
  return parse_attributes(in, num_nodes);
}

void write_attributes(std::ostream& out, const NodeAttributes& attrs) {
  out << "# id phi b a\n";
  for (std::size_t i = 0; i < attrs.phi.size(); ++i) {
    out << i << ' ' << format_double(attrs.phi[i]) << ' ' << format_double(attrs.b[i]) << ' '
        << format_double(attrs.a.empty() ? 0.0 : attrs.a[i]) << '\n';
  }
}

void save_attributes(const std::filesystem::path& path, const NodeAttributes& attrs) {
  auto out = open_output(path);
  write_attributes(out, attrs);
  if (!out) throw LoadError("write failed for '" + path.string() + "'");
}

}  // namespace optresp
