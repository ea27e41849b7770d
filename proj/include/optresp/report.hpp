#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "optresp/vcycle.hpp"

namespace optresp {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// `key = value` lines, one per entry; values are written verbatim.
void write_key_values(std::ostream& out, const KeyValues& kv);

/// Summary of a solve (objective, counts, timings, per-level sizes).
KeyValues summarize(const SolveReport& report, const ResponseInstance& inst);

/// CSV `seconds,objective`.
void write_trace_csv(std::ostream& out, const SolveReport& report);

/// CSV with one row per hierarchy level, finest first.
void write_levels_csv(std::ostream& out, const SolveReport& report);

/// CSV `level,step,objective` from the refinement traces.
void write_refine_trace_csv(std::ostream& out, const SolveReport& report);

/// `# id x` header then one `id x` line per node.
void write_solution(std::ostream& out, std::span<const std::uint8_t> x);
Assignment parse_solution(std::istream& in, std::size_t num_nodes);

void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace optresp
