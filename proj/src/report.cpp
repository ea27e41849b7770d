#include "optresp/report.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "optresp/graph_io.hpp"

namespace optresp {

void write_key_values(std::ostream& out, const KeyValues& kv) {
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

KeyValues summarize(const SolveReport& report, const ResponseInstance& inst) {
  const Solution& s = report.solution;
  KeyValues kv{
      {"method", report.method},
      {"nodes", std::to_string(inst.num_nodes())},
      {"edges", std::to_string(inst.graph.num_edges())},
      {"objective", format_double(s.objective)},
      {"feasible", s.feasible ? "true" : "false"},
      {"closed_nodes", std::to_string(s.num_closed())},
      {"levels", std::to_string(report.levels.size())},
      {"coarsest_optimal", report.coarsest_optimal ? "true" : "false"},
      {"budget_exhausted", report.budget_exhausted ? "true" : "false"},
      {"subproblems", std::to_string(report.subproblems)},
      {"iterations", std::to_string(report.iterations)},
      {"coarsen_seconds", format_double(report.coarsen_seconds)},
      {"coarsest_seconds", format_double(report.coarsest_seconds)},
      {"uncoarsen_seconds", format_double(report.uncoarsen_seconds)},
      {"total_seconds", format_double(report.total_seconds)},
  };
  for (const LevelStats& l : report.levels) {
    const std::string p = "level" + std::to_string(l.level) + ".";
    kv.emplace_back(p + "nodes", std::to_string(l.num_nodes));
    if (l.coarse_size > 0) kv.emplace_back(p + "theta", format_double(l.theta_used));
    kv.emplace_back(p + "objective_refined", format_double(l.objective_refined));
  }
  return kv;
}

void write_trace_csv(std::ostream& out, const SolveReport& report) {
  out << "seconds,objective\n";
  for (const TracePoint& t : report.trace) {
    out << format_double(t.seconds) << ',' << format_double(t.objective) << '\n';
  }
}

void write_levels_csv(std::ostream& out, const SolveReport& report) {
  out << "level,nodes,edges,coarse_nodes,theta,theta_retries,objective_interpolated,"
         "objective_smoothed,objective_refined,subproblems,seconds\n";
  for (const LevelStats& l : report.levels) {
    out << l.level << ',' << l.num_nodes << ',' << l.num_edges << ',' << l.coarse_size << ','
        << format_double(l.theta_used) << ',' << l.theta_retries << ','
        << format_double(l.objective_interpolated) << ',' << format_double(l.objective_smoothed) << ','
        << format_double(l.objective_refined) << ',' << l.subproblems << ',' << format_double(l.seconds)
        << '\n';
  }
}

void write_refine_trace_csv(std::ostream& out, const SolveReport& report) {
  out << "level,step,objective\n";
  for (const LevelStats& l : report.levels) {
    for (std::size_t k = 0; k < l.refine_trace.size(); ++k) {
      out << l.level << ',' << k << ',' << format_double(l.refine_trace[k]) << '\n';
    }
  }
}

void write_solution(std::ostream& out, std::span<const std::uint8_t> x) {
  out << "# id x\n";
  for (std::size_t i = 0; i < x.size(); ++i) out << i << ' ' << int{x[i]} << '\n';
}

Assignment parse_solution(std::istream& in, std::size_t num_nodes) {
  Assignment x(num_nodes, 0);
  std::vector<std::uint8_t> seen(num_nodes, 0);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    long long id = -1;
    int v = -1;
    if (!(ss >> id >> v) || (v != 0 && v != 1)) throw LoadError("expected `id x` with x in {0,1}", lineno);
    if (id < 0 || static_cast<std::size_t>(id) >= num_nodes) throw LoadError("node id out of range", lineno);
    if (seen[id]) throw LoadError("duplicate node id", lineno);
    seen[id] = 1;
    x[id] = static_cast<std::uint8_t>(v);
  }
  for (std::size_t i = 0; i < num_nodes; ++i) {
    if (!seen[i]) throw LoadError("node " + std::to_string(i) + " missing from solution", lineno);
  }
  return x;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << contents;
  if (!f) throw Error("failed writing " + path.string());
}

}  // namespace optresp
