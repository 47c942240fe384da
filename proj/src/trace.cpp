#include "irm/trace.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace irm {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SolveStatus status_from_string(const std::string& s) {
  if (s == "converged") return SolveStatus::converged;
  if (s == "max-iterations") return SolveStatus::max_iterations;
  if (s == "error") return SolveStatus::error;
  throw FormatError("unknown status: " + s);
}

constexpr const char* kHeader = "iter,abs_res,rel_res,energy,basis_size,spmv,wall_nanos";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw FormatError("bad number: " + s);
  return v;
}

long long parse_ll(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) throw FormatError("bad integer: " + s);
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace) {
  out << "# schema=1\n";
  out << "# method=" << trace.method << "\n";
  out << "# status=" << to_string(trace.status) << "\n";
  if (trace.status == SolveStatus::error) out << "# error=" << trace.error_text << "\n";
  out << "# final_rel_res=" << fmt17(trace.final_rel_res) << "\n";
  out << "# spmv=" << trace.spmv << "\n";
  out << "# spmv_total=" << trace.spmv_total << "\n";
  out << kHeader << "\n";
  for (const TraceRecord& rec : trace.records) {
    out << rec.iter << ',' << fmt17(rec.abs_res) << ',' << fmt17(rec.rel_res) << ',';
    if (rec.energy) out << fmt17(*rec.energy);
    out << ',' << rec.basis_size << ',' << rec.spmv << ',' << rec.wall_nanos << "\n";
  }
}

ConvergenceTrace read_trace_csv(std::istream& in) {
  ConvergenceTrace trace;
  std::string line;
  bool saw_schema = false;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body.erase(0, 1);
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key == "schema") {
        if (value != "1") throw FormatError("unsupported trace schema: " + value);
        saw_schema = true;
      } else if (key == "method") {
        trace.method = value;
      } else if (key == "status") {
        trace.status = status_from_string(value);
      } else if (key == "error") {
        trace.error_text = value;
      } else if (key == "final_rel_res") {
        trace.final_rel_res = parse_double(value);
      } else if (key == "spmv") {
        trace.spmv = parse_ll(value);
      } else if (key == "spmv_total") {
        trace.spmv_total = parse_ll(value);
      }
      continue;
    }
    if (!saw_header) {
      if (line != kHeader) throw FormatError("unexpected trace header: " + line);
      saw_header = true;
      continue;
    }
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != 7) throw FormatError("trace row must have 7 cells: " + line);
    TraceRecord rec;
    rec.iter = static_cast<Index>(parse_ll(cells[0]));
    rec.abs_res = parse_double(cells[1]);
    rec.rel_res = parse_double(cells[2]);
    if (!cells[3].empty()) rec.energy = parse_double(cells[3]);
    rec.basis_size = static_cast<int>(parse_ll(cells[4]));
    rec.spmv = parse_ll(cells[5]);
    rec.wall_nanos = parse_ll(cells[6]);
    trace.records.push_back(rec);
  }
  if (!saw_schema || !saw_header) throw FormatError("not a trace file");
  return trace;
}

void write_trace_json(std::ostream& out, const ConvergenceTrace& trace) {
  nlohmann::json j;
  j["schema"] = 1;
  j["method"] = trace.method;
  j["status"] = to_string(trace.status);
  if (trace.status == SolveStatus::error) j["error"] = trace.error_text;
  j["final_rel_res"] = trace.final_rel_res;
  j["spmv"] = trace.spmv;
  j["spmv_total"] = trace.spmv_total;
  nlohmann::json records = nlohmann::json::array();
  for (const TraceRecord& rec : trace.records) {
    nlohmann::json row;
    row["iter"] = rec.iter;
    row["abs_res"] = rec.abs_res;
    row["rel_res"] = rec.rel_res;
    row["energy"] = rec.energy ? nlohmann::json(*rec.energy) : nlohmann::json(nullptr);
    row["basis_size"] = rec.basis_size;
    row["spmv"] = rec.spmv;
    row["wall_nanos"] = rec.wall_nanos;
    records.push_back(row);
  }
  j["records"] = std::move(records);
  out << j.dump(2) << "\n";
}

ConvergenceTrace read_trace_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad JSON trace: ") + e.what());
  }
  try {
    if (j.at("schema").get<int>() != 1) throw FormatError("unsupported trace schema");
    ConvergenceTrace trace;
    trace.method = j.at("method").get<std::string>();
    trace.status = status_from_string(j.at("status").get<std::string>());
    if (j.contains("error")) trace.error_text = j["error"].get<std::string>();
    trace.final_rel_res = j.at("final_rel_res").get<double>();
    trace.spmv = j.at("spmv").get<long long>();
    trace.spmv_total = j.at("spmv_total").get<long long>();
    for (const auto& row : j.at("records")) {
      TraceRecord rec;
      rec.iter = row.at("iter").get<Index>();
      rec.abs_res = row.at("abs_res").get<double>();
      rec.rel_res = row.at("rel_res").get<double>();
      if (!row.at("energy").is_null()) rec.energy = row.at("energy").get<double>();
      rec.basis_size = row.at("basis_size").get<int>();
      rec.spmv = row.at("spmv").get<long long>();
      rec.wall_nanos = row.at("wall_nanos").get<long long>();
      trace.records.push_back(rec);
    }
    return trace;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad JSON trace: ") + e.what());
  }
}

}  // namespace irm
