#include "pising/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace pising {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BadValueError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BadValueError("cannot write " + path);
  out << text;
  if (!out) throw BadValueError("write failed for " + path);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::string model_to_json(const IsingModel& model, const PlanarEmbedding* emb) {
  model.check_consistent();
  ordered_json j;
  j["n"] = model.graph.num_vertices();
  j["mode"] = model.zero_field() && !model.aux_vertex ? "zero_field" : "field";
  ordered_json edges = ordered_json::array();
  const auto& es = model.graph.edges();
  for (int k = 0; k < model.graph.num_edges(); ++k) {
    edges.push_back({{"u", es[k].first}, {"v", es[k].second}, {"theta", model.theta_edges[k]}});
  }
  j["edges"] = std::move(edges);
  if (!model.zero_field()) j["fields"] = model.theta_nodes;
  if (model.aux_vertex) j["aux_vertex"] = *model.aux_vertex;
  if (emb && emb->has_coords()) {
    ordered_json pos = ordered_json::array();
    for (const auto& p : emb->coords) pos.push_back({p[0], p[1]});
    j["positions"] = std::move(pos);
  }
  return j.dump(2) + "\n";
}

LoadedModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw BadValueError(std::string("model JSON parse error: ") + e.what());
  }
  try {
    int n = j.at("n").get<int>();
    if (n < 0) throw BadValueError("negative n");
    Graph g(n);
    std::vector<double> theta;
    for (const auto& e : j.at("edges")) {
      g.add_edge(e.at("u").get<int>(), e.at("v").get<int>());
      theta.push_back(e.at("theta").get<double>());
    }
    std::vector<double> fields(n, 0.0);
    if (j.contains("fields")) {
      fields = j["fields"].get<std::vector<double>>();
      if (static_cast<int>(fields.size()) != n) throw BadValueError("fields size mismatch");
    }
    std::string mode = j.value("mode", "zero_field");
    if (mode != "zero_field" && mode != "field")
      throw BadValueError("mode must be zero_field or field");

    LoadedModel out;
    out.model = IsingModel(std::move(g), std::move(theta), std::move(fields));
    if (j.contains("aux_vertex")) out.model.aux_vertex = j["aux_vertex"].get<int>();
    out.model.check_consistent();
    if (mode == "zero_field" && !out.model.zero_field())
      throw BadValueError("zero_field model carries nonzero fields");

    if (j.contains("positions")) {
      PlanarEmbedding emb;
      for (const auto& p : j["positions"])
        emb.coords.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      if (static_cast<int>(emb.coords.size()) != n)
        throw BadValueError("positions size mismatch");
      out.embedding = std::move(emb);
    }
    return out;
  } catch (const json::exception& e) {
    throw BadValueError(std::string("model JSON schema error: ") + e.what());
  }
}

void save_model(const std::string& path, const IsingModel& model,
                const PlanarEmbedding* emb) {
  write_file(path, model_to_json(model, emb));
}

LoadedModel load_model(const std::string& path) { return model_from_json(read_file(path)); }

void write_samples_csv(std::ostream& out, const Eigen::MatrixXi& samples) {
  for (Eigen::Index c = 0; c < samples.cols(); ++c) out << (c ? "," : "") << "v" << c;
  out << "\n";
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    for (Eigen::Index c = 0; c < samples.cols(); ++c)
      out << (c ? "," : "") << samples(r, c);
    out << "\n";
  }
}

void save_samples(const std::string& path, const Eigen::MatrixXi& samples) {
  std::ostringstream buf;
  write_samples_csv(buf, samples);
  write_file(path, buf.str());
}

Eigen::MatrixXi load_samples(const std::string& path, bool zero_one) {
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<std::vector<int>> rows;
  int ncols = -1;
  bool header_seen = false;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!header_seen) {  // header row of names
      header_seen = true;
      ncols = static_cast<int>(split_csv(t).size());
      continue;
    }
    auto fields = split_csv(t);
    if (static_cast<int>(fields.size()) != ncols)
      throw BadValueError("ragged samples CSV row");
    std::vector<int> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      int v;
      try {
        v = std::stoi(trim(fields[c]));
      } catch (const std::exception&) {
        throw BadValueError("non-integer sample entry '" + fields[c] + "'");
      }
      if (zero_one) {
        if (v != 0 && v != 1) throw BadValueError("samples must be 0/1");
        v = v == 0 ? -1 : 1;
      } else if (v != -1 && v != 1) {
        throw BadValueError("samples must be -1/+1 (use zero_one for 0/1 data)");
      }
      row[c] = v;
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw BadValueError("samples CSV is empty");
  Eigen::MatrixXi out(static_cast<Eigen::Index>(rows.size()), ncols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < ncols; ++c) out(static_cast<Eigen::Index>(r), c) = rows[r][c];
  return out;
}

void save_moments(const std::string& path, const MomentSet& moments) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "# pairwise and first moments; n=" << moments.n << "\n";
  if (moments.sample_count) out << "# sample_count=" << *moments.sample_count << "\n";
  for (int i = 0; i < moments.n; ++i)
    for (int j = i + 1; j < moments.n; ++j)
      out << i << "," << j << "," << moments.pair(i, j) << "\n";
  for (int i = 0; i < moments.n; ++i) {
    if (moments.first[i] != 0) out << i << "," << moments.first[i] << "\n";
  }
  write_file(path, out.str());
}

MomentSet load_moments(const std::string& path, int n_hint) {
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<std::tuple<int, int, double>> pairs;
  std::vector<std::pair<int, double>> firsts;
  std::optional<long> sample_count;
  int max_vertex = -1;

  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      auto at = t.find("sample_count=");
      if (at != std::string::npos) {
        try {
          sample_count = std::stol(t.substr(at + 13));
        } catch (const std::exception&) {
          throw BadValueError("bad sample_count comment");
        }
      }
      continue;
    }
    auto fields = split_csv(t);
    try {
      if (fields.size() == 3) {
        int i = std::stoi(trim(fields[0])), j = std::stoi(trim(fields[1]));
        double mu = std::stod(trim(fields[2]));
        if (i == j) throw BadValueError("self-pair moment");
        pairs.emplace_back(i, j, mu);
        max_vertex = std::max({max_vertex, i, j});
      } else if (fields.size() == 2) {
        int i = std::stoi(trim(fields[0]));
        double mu = std::stod(trim(fields[1]));
        firsts.emplace_back(i, mu);
        max_vertex = std::max(max_vertex, i);
      } else {
        throw BadValueError("moment rows need 2 or 3 fields");
      }
    } catch (const std::invalid_argument&) {
      throw BadValueError("bad number in moments CSV: " + t);
    } catch (const std::out_of_range&) {
      throw BadValueError("number out of range in moments CSV: " + t);
    }
  }

  int n = std::max(n_hint, max_vertex + 1);
  if (n <= 0) throw BadValueError("moments CSV names no vertices");
  MomentSet out(n);
  for (auto [i, j, mu] : pairs) {
    if (i < 0 || j < 0) throw BadValueError("negative vertex id");
    if (!std::isfinite(mu) || std::abs(mu) > 1) throw BadValueError("pair moment outside [-1,1]");
    out.set_pair(i, j, mu);
  }
  for (auto [i, mu] : firsts) {
    if (i < 0) throw BadValueError("negative vertex id");
    if (!std::isfinite(mu) || std::abs(mu) > 1) throw BadValueError("first moment outside [-1,1]");
    out.first[i] = mu;
  }
  out.sample_count = sample_count;
  return out;
}

void write_trace_csv(std::ostream& out, const LearnTrace& trace) {
  out << std::setprecision(17);
  out << "step,u,v,bound_gain,realized_gain,avg_ll,num_edges,newton_iters,rejected\n";
  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    const LearnStep& st = trace.steps[s];
    out << s << "," << st.edge.first << "," << st.edge.second << "," << st.bound_gain
        << "," << st.realized_gain << "," << st.avg_ll << "," << st.num_edges << ","
        << st.newton_iters << "," << (st.rejected ? 1 : 0) << "\n";
  }
}

void save_trace(const std::string& path, const LearnTrace& trace) {
  std::ostringstream buf;
  write_trace_csv(buf, trace);
  write_file(path, buf.str());
}

std::string model_to_dot(const IsingModel& model, const PlanarEmbedding* emb) {
  model.check_consistent();
  std::ostringstream out;
  out << std::fixed << std::setprecision(6);
  out << "graph ising {\n";
  for (int v = 0; v < model.graph.num_vertices(); ++v) {
    out << "  " << v;
    bool attrs = false;
    auto open = [&]() { out << (attrs ? ", " : " ["); attrs = true; };
    if (!model.zero_field() && model.theta_nodes[v] != 0) {
      open();
      out << "field=" << model.theta_nodes[v];
    }
    if (emb && emb->has_coords()) {
      open();
      out << "pos=\"" << emb->coords[v][0] << "," << emb->coords[v][1] << "!\"";
    }
    if (model.aux_vertex && *model.aux_vertex == v) {
      open();
      out << "aux=1";
    }
    if (attrs) out << "]";
    out << ";\n";
  }
  const auto& es = model.graph.edges();
  for (int k = 0; k < model.graph.num_edges(); ++k) {
    out << "  " << es[k].first << " -- " << es[k].second << " [theta="
        << model.theta_edges[k] << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string manifest_to_json(const RunManifest& m) {
  ordered_json j;
  j["subcommand"] = m.subcommand;
  ordered_json flags = ordered_json::object();
  for (const auto& [k, v] : m.flags) flags[k] = v;
  j["flags"] = std::move(flags);
  j["seed"] = m.seed;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["wall_clock_sec"] = m.wall_clock_sec;
  j["version"] = m.version;
  j["notes"] = m.notes;
  return j.dump(2) + "\n";
}

void save_manifest(const std::string& output_path, const RunManifest& m) {
  write_file(output_path + ".manifest.json", manifest_to_json(m));
}

}  // namespace pising
