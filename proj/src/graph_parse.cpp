#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "csma/error.hpp"
#include "csma/graph.hpp"

namespace csma {
namespace {

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

// line 0 means "no line information" (JSON documents).
[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  fail(ErrorCode::kParse, line == 0 ? what : "line " + std::to_string(line) + ": " + what);
}

// Shared by both formats: resolves names, rejects what the graph type forbids
// with a message that names the offending link.
class GraphBuilder {
 public:
  void declare(const std::vector<std::string>& ids, std::size_t line) {
    if (ids.empty()) parse_error(line, "empty link list");
    for (const auto& id : ids) {
      if (!index_.emplace(id, ids_.size()).second) parse_error(line, "duplicate link id '" + id + "'");
      ids_.push_back(id);
    }
    if (ids_.size() > kHardMaxLinks) {
      fail(ErrorCode::kLimitExceeded, "graph declares " + std::to_string(ids_.size()) +
                                          " links; at most " + std::to_string(kHardMaxLinks) +
                                          " are supported");
    }
  }

  void edge(const std::string& a, const std::string& b, std::size_t line) {
    const std::size_t ia = lookup(a, line);
    const std::size_t ib = lookup(b, line);
    if (ia == ib) parse_error(line, "self-loop edge on link '" + a + "'");
    edges_.emplace_back(ia, ib);
  }

  ContentionGraph build(std::size_t line) && {
    if (ids_.empty()) parse_error(line, "empty link list");
    return ContentionGraph(std::move(ids_), edges_);
  }

 private:
  std::size_t lookup(const std::string& id, std::size_t line) const {
    auto it = index_.find(id);
    if (it == index_.end()) parse_error(line, "edge references undeclared link '" + id + "'");
    return it->second;
  }

  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  EdgeList edges_;
};

ContentionGraph parse_line_format(std::string_view text) {
  GraphBuilder builder;
  bool have_links = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) parse_error(line_no, "expected 'links:' or 'edge:'");
    const std::string_view key = trim(line.substr(0, colon));
    const auto args = split_ws(line.substr(colon + 1));

    if (key == "links") {
      if (have_links) parse_error(line_no, "links declared twice");
      builder.declare(args, line_no);
      have_links = true;
    } else if (key == "edge") {
      if (!have_links) parse_error(line_no, "edge before links declaration");
      if (args.size() != 2) parse_error(line_no, "edge needs exactly two link ids");
      builder.edge(args[0], args[1], line_no);
    } else {
      parse_error(line_no, "unknown directive '" + std::string(key) + "'");
    }
  }
  if (!have_links) parse_error(line_no, "empty link list");
  return std::move(builder).build(line_no);
}

ContentionGraph parse_json_format(std::string_view text) {
  // Comment lines may precede the document.
  std::string body;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    if (trim(raw).starts_with("#")) {
      body += '\n';
      continue;
    }
    body += raw;
    body += '\n';
  }

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kParse, std::string("malformed JSON graph: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("links") || !doc["links"].is_array()) {
    fail(ErrorCode::kParse, "JSON graph needs a \"links\" array");
  }

  GraphBuilder builder;
  std::vector<std::string> ids;
  for (const auto& v : doc["links"]) {
    if (!v.is_string()) fail(ErrorCode::kParse, "link ids must be strings");
    ids.push_back(v.get<std::string>());
  }
  builder.declare(ids, 0);
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) fail(ErrorCode::kParse, "\"edges\" must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        fail(ErrorCode::kParse, "each edge must be a pair of link ids");
      }
      builder.edge(e[0].get<std::string>(), e[1].get<std::string>(), 0);
    }
  }
  return std::move(builder).build(0);
}

}  // namespace

ContentionGraph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    return line.front() == '{' ? parse_json_format(text) : parse_line_format(text);
  }
  fail(ErrorCode::kParse, "empty link list");
}

ContentionGraph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open graph file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

}  // namespace csma
