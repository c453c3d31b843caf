#include "effsens/report.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "effsens/csv.hpp"

namespace effsens::report {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

IndexRow make_row(const std::string& parameter, const EstimateReport& r) {
  IndexRow row;
  row.parameter = parameter;
  if (r.sobol) {
    row.sigma_raw = r.sobol->index_raw;
    row.sigma_clipped = r.sobol->index_clipped;
  }
  row.t_hat = r.t_hat;
  row.ci = {r.ci_95.first, r.ci_95.second};
  row.n = r.diagnostics.n;
  row.n1 = r.diagnostics.n1;
  row.n2 = r.diagnostics.n2;
  row.m_size = r.diagnostics.m_size;
  if (r.diagnostics.bandwidths) row.bandwidths = {{r.diagnostics.bandwidths->x, r.diagnostics.bandwidths->y}};
  if (r.diagnostics.domain) {
    const Domain& d = *r.diagnostics.domain;
    row.domain = {{d.x.lo(), d.x.hi(), d.y.lo(), d.y.hi()}};
  }
  row.warnings = r.warnings;
  return row;
}

void rank(IndexReport& rep) {
  std::stable_sort(rep.rows.begin(), rep.rows.end(),
                   [](const IndexRow& a, const IndexRow& b) { return a.sigma_raw > b.sigma_raw; });
}

json to_json(const IndexReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json o{{"parameter", r.parameter},
           {"sigma_raw", r.sigma_raw},
           {"sigma_clipped", r.sigma_clipped},
           {"t_hat", r.t_hat},
           {"ci", {r.ci[0], r.ci[1]}},
           {"n", r.n},
           {"n1", r.n1},
           {"n2", r.n2},
           {"m_size", r.m_size}};
    o["bandwidths"] = r.bandwidths ? json{(*r.bandwidths)[0], (*r.bandwidths)[1]} : json(nullptr);
    o["domain"] = r.domain ? json{{"x", {(*r.domain)[0], (*r.domain)[1]}},
                                  {"y", {(*r.domain)[2], (*r.domain)[3]}}}
                           : json(nullptr);
    o["warnings"] = r.warnings;
    rows.push_back(std::move(o));
  }
  return json{{"version", rep.version}, {"command", rep.command}, {"config", rep.config},
              {"rows", std::move(rows)}};
}

IndexReport from_json(const json& j) {
  IndexReport rep;
  rep.version = j.at("version").get<int>();
  if (rep.version != kSchemaVersion)
    throw std::runtime_error("unsupported report schema version " + std::to_string(rep.version));
  rep.command = j.at("command").get<std::string>();
  rep.config = j.value("config", json::object());
  for (const auto& o : j.at("rows")) {
    IndexRow r;
    r.parameter = o.at("parameter").get<std::string>();
    r.sigma_raw = o.at("sigma_raw").get<double>();
    r.sigma_clipped = o.at("sigma_clipped").get<double>();
    r.t_hat = o.at("t_hat").get<double>();
    r.ci = {o.at("ci").at(0).get<double>(), o.at("ci").at(1).get<double>()};
    r.n = o.at("n").get<std::size_t>();
    r.n1 = o.at("n1").get<std::size_t>();
    r.n2 = o.at("n2").get<std::size_t>();
    r.m_size = o.at("m_size").get<std::size_t>();
    if (!o.at("bandwidths").is_null())
      r.bandwidths = {{o["bandwidths"].at(0).get<double>(), o["bandwidths"].at(1).get<double>()}};
    if (!o.at("domain").is_null()) {
      const auto& d = o["domain"];
      r.domain = {{d.at("x").at(0).get<double>(), d.at("x").at(1).get<double>(),
                   d.at("y").at(0).get<double>(), d.at("y").at(1).get<double>()}};
    }
    if (o.contains("warnings")) r.warnings = o["warnings"].get<std::vector<std::string>>();
    rep.rows.push_back(std::move(r));
  }
  return rep;
}

namespace {

const char* kIndexHeader =
    "rank,parameter,sigma_raw,sigma_clipped,t_hat,ci_lo,ci_hi,n,n1,n2,m_size,hx,hy,"
    "x_lo,x_hi,y_lo,y_hi";

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double number(const std::string& cell, const char* what) {
  double v = 0.0;
  if (!csv::parse_number(cell, v)) throw std::runtime_error(std::string("bad ") + what + ": '" + cell + "'");
  return v;
}

}  // namespace

void write_csv(const IndexReport& rep, std::ostream& out) {
  out << kIndexHeader << '\n';
  std::size_t rank_no = 0;
  for (const auto& r : rep.rows) {
    out << ++rank_no << ',' << quote(r.parameter) << ',' << format_double(r.sigma_raw) << ','
        << format_double(r.sigma_clipped) << ',' << format_double(r.t_hat) << ','
        << format_double(r.ci[0]) << ',' << format_double(r.ci[1]) << ',' << r.n << ',' << r.n1
        << ',' << r.n2 << ',' << r.m_size;
    for (int k = 0; k < 2; ++k) out << ',' << (r.bandwidths ? format_double((*r.bandwidths)[k]) : "");
    for (int k = 0; k < 4; ++k) out << ',' << (r.domain ? format_double((*r.domain)[k]) : "");
    out << '\n';
  }
}

std::vector<IndexRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty report");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kIndexHeader) throw std::runtime_error("unexpected report header");
  std::vector<IndexRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = csv::split_line(line);
    if (c.size() != 17) throw std::runtime_error("report row has " + std::to_string(c.size()) + " fields");
    IndexRow r;
    r.parameter = c[1];
    r.sigma_raw = number(c[2], "sigma_raw");
    r.sigma_clipped = number(c[3], "sigma_clipped");
    r.t_hat = number(c[4], "t_hat");
    r.ci = {number(c[5], "ci_lo"), number(c[6], "ci_hi")};
    r.n = static_cast<std::size_t>(number(c[7], "n"));
    r.n1 = static_cast<std::size_t>(number(c[8], "n1"));
    r.n2 = static_cast<std::size_t>(number(c[9], "n2"));
    r.m_size = static_cast<std::size_t>(number(c[10], "m_size"));
    if (!c[11].empty()) r.bandwidths = {{number(c[11], "hx"), number(c[12], "hy")}};
    if (!c[13].empty())
      r.domain = {{number(c[13], "x_lo"), number(c[14], "x_hi"), number(c[15], "y_lo"),
                   number(c[16], "y_hi")}};
    rows.push_back(std::move(r));
  }
  return rows;
}

json to_json(const ReplicationTable& table, const json& config) {
  json rows = json::array();
  for (const auto& r : table.rows)
    rows.push_back({{"model", r.model},
                    {"config", r.config},
                    {"input", r.input},
                    {"n", r.n},
                    {"quantity", r.quantity},
                    {"truth", r.truth},
                    {"mean", r.mean},
                    {"std", r.std},
                    {"coverage", r.coverage},
                    {"replications", r.replications}});
  return json{{"version", kSchemaVersion}, {"command", "replicate"}, {"config", config},
              {"rows", std::move(rows)}};
}

void write_csv(const ReplicationTable& table, std::ostream& out) {
  out << "model,config,input,n,quantity,truth,mean,std,coverage,replications\n";
  for (const auto& r : table.rows)
    out << r.model << ',' << r.config << ',' << r.input << ',' << r.n << ',' << quote(r.quantity)
        << ',' << format_double(r.truth) << ',' << format_double(r.mean) << ','
        << format_double(r.std) << ',' << format_double(r.coverage) << ',' << r.replications
        << '\n';
}

}  // namespace effsens::report
