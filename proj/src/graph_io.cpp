#include "heatlab/graph_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "heatlab/errors.hpp"
#include "heatlab/report.hpp"

namespace heatlab {

namespace {

class VertexIndex {
 public:
  explicit VertexIndex(RawGraph& raw) : raw_(raw) {}

  void add(const std::string& id, double mu, const std::string& where) {
    if (!ids_.emplace(id, raw_.mu.size()).second) {
      throw Error(ErrorCode::InputError, where + ": duplicate vertex '" + id + "'");
    }
    raw_.add_vertex(id, mu);
  }

  VertexId lookup(const std::string& id, const std::string& where) const {
    auto it = ids_.find(id);
    if (it == ids_.end()) throw Error(ErrorCode::InputError, where + ": undeclared vertex '" + id + "'");
    return it->second;
  }

  void add_edge(const std::string& u, const std::string& v, double b, const std::string& where) {
    const VertexId x = lookup(u, where);
    const VertexId y = lookup(v, where);
    if (!edges_.insert({std::min(x, y), std::max(x, y)}).second) {
      throw Error(ErrorCode::InputError, where + ": edge " + u + "-" + v + " listed twice");
    }
    if (x == y) {
      raw_.add_entry(x, x, b);
    } else {
      raw_.add_edge(x, y, b);
    }
  }

 private:
  RawGraph& raw_;
  std::map<std::string, VertexId> ids_;
  std::set<std::pair<VertexId, VertexId>> edges_;
};

double parse_number(const std::string& token, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InputError, where + ": not a number: '" + token + "'");
  }
}

}  // namespace

RawGraph parse_graph_text(std::istream& in) {
  RawGraph raw;
  VertexIndex index(raw);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    std::vector<std::string> fields;
    for (std::string f; ls >> f;) fields.push_back(f);

    if (tag == "graph") {
      if (have_header) throw Error(ErrorCode::InputError, where + ": second 'graph' header");
      have_header = true;
      raw.name = fields.empty() ? "" : fields[0];
    } else if (tag == "v") {
      if (fields.size() != 2) throw Error(ErrorCode::InputError, where + ": expected 'v <id> <mu>'");
      index.add(fields[0], parse_number(fields[1], where), where);
    } else if (tag == "e") {
      if (fields.size() != 3) {
        throw Error(ErrorCode::InputError, where + ": expected 'e <id> <id> <b>'");
      }
      index.add_edge(fields[0], fields[1], parse_number(fields[2], where), where);
    } else {
      throw Error(ErrorCode::InputError, where + ": unknown record '" + tag + "'");
    }
  }
  if (!have_header) throw Error(ErrorCode::InputError, "missing 'graph <name>' header");
  return raw;
}

RawGraph parse_graph_json(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InputError, std::string("graph document: ") + e.what());
  }
  RawGraph raw;
  VertexIndex index(raw);
  try {
    raw.name = doc.value("name", "");
    const auto id_of = [](const nlohmann::json& j) {
      return j.is_string() ? j.get<std::string>() : j.dump();
    };
    for (const auto& v : doc.at("vertices")) {
      index.add(id_of(v.at("id")), v.at("mu").get<double>(), "vertex " + id_of(v.at("id")));
    }
    for (const auto& e : doc.at("edges")) {
      const std::string u = id_of(e.at("u"));
      const std::string v = id_of(e.at("v"));
      index.add_edge(u, v, e.at("b").get<double>(), "edge " + u + "-" + v);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InputError, std::string("graph document: ") + e.what());
  }
  return raw;
}

RawGraph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InputError, "cannot open graph file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_graph_json(text);
  std::istringstream ts(text);
  return parse_graph_text(ts);
}

void write_graph_text(std::ostream& out, const WeightedGraph& g) {
  out << "graph " << (g.name().empty() ? "unnamed" : g.name()) << '\n';
  for (VertexId x = 0; x < g.size(); ++x) out << "v " << g.label(x) << ' ' << format_double(g.mu(x)) << '\n';
  for (VertexId x = 0; x < g.size(); ++x) {
    for (const Edge& e : g.neighbors(x)) {
      if (e.target > x) {
        out << "e " << g.label(x) << ' ' << g.label(e.target) << ' ' << format_double(e.weight) << '\n';
      }
    }
  }
}

}  // namespace heatlab
