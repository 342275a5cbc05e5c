#include "core/io/serialize.hpp"

#include <fstream>
#include <sstream>

#include "core/support/error.hpp"
#include "core/support/numfmt.hpp"

namespace semiflow {

const char* tool_version() { return "0.1.0"; }

std::string csv_field(const std::string& raw) {
  bool needs_quotes = raw.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_field(cells[i]);
  }
  out += '\n';
  return out;
}

std::string csv_meta_header(const Json& meta) {
  std::string out = "# semiflow ";
  out += tool_version();
  out += '\n';
  for (const auto& item : meta.items()) {
    if (item.key() == "tool" || item.key() == "version") continue;
    out += "# " + item.key() + ": ";
    out += item.value().is_string() ? item.value().get<std::string>()
                                    : item.value().dump();
    out += '\n';
  }
  return out;
}

namespace {

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

std::vector<std::string> coord_headers(const std::string& stem, size_t dim) {
  std::vector<std::string> h;
  for (size_t i = 1; i <= dim; ++i) h.push_back(stem + std::to_string(i));
  return h;
}

void append_coords(std::vector<std::string>& cells, const Vec& v, size_t dim) {
  for (size_t i = 0; i < dim; ++i)
    cells.push_back(i < v.size() ? fmt_double(v[i]) : "");
}

}  // namespace

Json to_json(const SampleDescriptor& d) {
  Json j;
  j["seed"] = d.seed;
  j["n_points"] = d.n_points;
  j["n_pairs"] = d.n_pairs;
  j["mu"] = d.mu;
  j["strategy"] = d.strategy;
  return j;
}

Json to_json(const ModulusReport& r) {
  Json j;
  j["estimator_kind"] = r.estimator_kind;
  j["fd_step"] = r.fd_step;
  j["sample"] = to_json(r.sample_descriptor);
  Json rows = Json::array();
  for (size_t i = 0; i < r.t_grid.size(); ++i) {
    Json row;
    row["t"] = r.t_grid[i];
    row["value"] = i < r.values.size() ? r.values[i] : 0.0;
    if (i < r.witnesses.size()) {
      row["x"] = vec_json(r.witnesses[i].x);
      if (r.witnesses[i].has_pair) row["x_tilde"] = vec_json(r.witnesses[i].x_tilde);
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

Json to_json(const InequalityReport& r) {
  Json j;
  j["statement_id"] = r.statement_id;
  j["pass"] = r.pass;
  j["tolerance"] = r.tolerance;
  j["ell"] = r.ell;
  Json echo;
  for (const auto& [k, v] : r.inputs_echo) echo[k] = v;
  j["inputs_echo"] = echo;
  Json rows = Json::array();
  for (const InequalityPoint& p : r.per_point) {
    Json row;
    row["x"] = vec_json(p.x);
    row["t"] = p.t;
    row["lhs"] = p.lhs;
    row["rhs"] = p.rhs;
    row["margin"] = p.margin;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

Json to_json(const GeneratorEstimate& e) {
  Json j;
  j["converged"] = e.converged;
  Json cert;
  cert["mu"] = e.certificate.mu;
  cert["delta1"] = e.certificate.delta1;
  cert["epsilon"] = e.certificate.epsilon;
  cert["L"] = e.certificate.L;
  cert["bound"] = e.certificate.bound;
  j["certificate"] = cert;
  j["cauchy_gap"] = e.cauchy_gap;
  j["t_schedule"] = vec_json(e.t_schedule);
  j["gaps"] = vec_json(e.gaps);
  Json pts = Json::array(), fv = Json::array();
  for (const Vec& p : e.points) pts.push_back(vec_json(p));
  for (const Vec& f : e.f_values) fv.push_back(vec_json(f));
  j["points"] = pts;
  j["f_values"] = fv;
  return j;
}

Json to_json(const PathCertificate& c) {
  Json j;
  j["refuted"] = c.refuted;
  if (c.refuted) {
    Json rows = Json::array();
    for (const RefutationRow& r : c.rows) {
      Json row;
      row["level"] = r.level;
      row["target"] = vec_json(r.target);
      row["lower_bound"] = r.lower_bound;
      row["reference"] = r.reference;
      rows.push_back(row);
    }
    j["rows"] = rows;
  } else {
    j["length_bound"] = c.length_bound;
    j["d2_label"] = c.d2.label;
    j["d2_pieces"] = c.d2.pieces.size();
  }
  return j;
}

Json report_document(const std::string& kind, const Json& meta, Json payload) {
  Json doc;
  doc["tool"] = "semiflow";
  doc["version"] = tool_version();
  doc["kind"] = kind;
  for (const auto& item : meta.items()) {
    if (item.key() == "tool" || item.key() == "version") continue;
    doc[item.key()] = item.value();
  }
  doc["report"] = std::move(payload);
  return doc;
}

std::string modulus_csv(const ModulusReport& r, const Json& meta) {
  size_t dim = 0;
  bool any_pair = false;
  for (const ModulusWitness& w : r.witnesses) {
    dim = std::max(dim, w.x.size());
    any_pair = any_pair || w.has_pair;
  }
  std::string out = csv_meta_header(meta);
  std::vector<std::string> header = {"t", "value"};
  for (const std::string& h : coord_headers("x", dim)) header.push_back(h);
  if (any_pair)
    for (const std::string& h : coord_headers("x_tilde", dim)) header.push_back(h);
  out += csv_row(header);
  for (size_t i = 0; i < r.t_grid.size(); ++i) {
    std::vector<std::string> cells = {fmt_double(r.t_grid[i]),
                                      fmt_double(i < r.values.size() ? r.values[i] : 0.0)};
    const ModulusWitness* w = i < r.witnesses.size() ? &r.witnesses[i] : nullptr;
    append_coords(cells, w ? w->x : Vec{}, dim);
    if (any_pair) append_coords(cells, w && w->has_pair ? w->x_tilde : Vec{}, dim);
    out += csv_row(cells);
  }
  return out;
}

std::string inequality_csv(const InequalityReport& r, const Json& meta) {
  size_t dim = 0;
  for (const InequalityPoint& p : r.per_point) dim = std::max(dim, p.x.size());
  std::string out = csv_meta_header(meta);
  std::vector<std::string> header = {"t"};
  for (const std::string& h : coord_headers("x", dim)) header.push_back(h);
  header.insert(header.end(), {"lhs", "rhs", "margin"});
  out += csv_row(header);
  for (const InequalityPoint& p : r.per_point) {
    std::vector<std::string> cells = {fmt_double(p.t)};
    append_coords(cells, p.x, dim);
    cells.push_back(fmt_double(p.lhs));
    cells.push_back(fmt_double(p.rhs));
    cells.push_back(fmt_double(p.margin));
    out += csv_row(cells);
  }
  return out;
}

std::string generator_gaps_csv(const GeneratorEstimate& e, const Json& meta) {
  std::string out = csv_meta_header(meta);
  out += csv_row({"t", "gap"});
  for (size_t i = 0; i < e.t_schedule.size(); ++i) {
    std::vector<std::string> cells = {fmt_double(e.t_schedule[i])};
    cells.push_back(i == 0 || i - 1 >= e.gaps.size() ? std::string()
                                                     : fmt_double(e.gaps[i - 1]));
    out += csv_row(cells);
  }
  return out;
}

std::string generator_fvalues_csv(const GeneratorEstimate& e, const Json& meta) {
  size_t dim = 0;
  for (const Vec& p : e.points) dim = std::max(dim, p.size());
  std::string out = csv_meta_header(meta);
  std::vector<std::string> header = coord_headers("x", dim);
  for (const std::string& h : coord_headers("f", dim)) header.push_back(h);
  out += csv_row(header);
  for (size_t i = 0; i < e.points.size(); ++i) {
    std::vector<std::string> cells;
    append_coords(cells, e.points[i], dim);
    append_coords(cells, i < e.f_values.size() ? e.f_values[i] : Vec{}, dim);
    out += csv_row(cells);
  }
  return out;
}

std::string polyline_csv(const std::vector<Vec>& nodes, const Json& meta) {
  size_t dim = 0;
  for (const Vec& n : nodes) dim = std::max(dim, n.size());
  std::string out = csv_meta_header(meta);
  std::vector<std::string> header = {"node"};
  for (const std::string& h : coord_headers("x", dim)) header.push_back(h);
  out += csv_row(header);
  for (size_t i = 0; i < nodes.size(); ++i) {
    std::vector<std::string> cells = {std::to_string(i)};
    append_coords(cells, nodes[i], dim);
    out += csv_row(cells);
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.flush();
  if (!f) fail(ErrorCode::IoError, "short write to " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  if (f.bad()) fail(ErrorCode::IoError, "read failure on " + path);
  return buf.str();
}

}  // namespace semiflow
