#include "ccgeo/emit.hpp"

#include <sstream>

namespace ccgeo {

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string emit_dot(const Space& s, const GraphAnnotations& ann) {
  std::ostringstream os;
  os << "graph \"" << dot_escape(s.name) << "\" {\n";
  for (Vertex v = 0; v < s.ids.size(); ++v) {
    os << "  \"" << dot_escape(s.ids[v]) << "\" [lattice=" << (s.in_lattice[v] ? 1 : 0);
    if (v == s.basepoint) os << ", basepoint=1";
    for (const auto& [key, vals] : ann.vertex_attrs)
      if (v < vals.size()) os << ", " << key << "=\"" << dot_escape(vals[v]) << "\"";
    os << "];\n";
  }
  for (uint32_t e = 0; e < s.edges.size(); ++e) {
    os << "  \"" << dot_escape(s.ids[s.edges[e].u]) << "\" -- \""
       << dot_escape(s.ids[s.edges[e].v]) << "\" [length=\"" << format_rat(s.edges[e].length)
       << "\"";
    for (const auto& [key, vals] : ann.edge_attrs)
      if (e < vals.size()) os << ", " << key << "=\"" << dot_escape(vals[e]) << "\"";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string emit_graphml(const Space& s, const GraphAnnotations& ann) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  os << "  <key id=\"lattice\" for=\"node\" attr.name=\"lattice\" attr.type=\"int\"/>\n";
  os << "  <key id=\"basepoint\" for=\"node\" attr.name=\"basepoint\" attr.type=\"int\"/>\n";
  for (const auto& [key, _] : ann.vertex_attrs)
    os << "  <key id=\"" << xml_escape(key) << "\" for=\"node\" attr.name=\"" << xml_escape(key)
       << "\" attr.type=\"string\"/>\n";
  os << "  <key id=\"length\" for=\"edge\" attr.name=\"length\" attr.type=\"string\"/>\n";
  for (const auto& [key, _] : ann.edge_attrs)
    os << "  <key id=\"" << xml_escape(key) << "\" for=\"edge\" attr.name=\"" << xml_escape(key)
       << "\" attr.type=\"string\"/>\n";
  os << "  <graph id=\"" << xml_escape(s.name) << "\" edgedefault=\"undirected\">\n";
  for (Vertex v = 0; v < s.ids.size(); ++v) {
    os << "    <node id=\"" << xml_escape(s.ids[v]) << "\">";
    os << "<data key=\"lattice\">" << (s.in_lattice[v] ? 1 : 0) << "</data>";
    if (v == s.basepoint) os << "<data key=\"basepoint\">1</data>";
    for (const auto& [key, vals] : ann.vertex_attrs)
      if (v < vals.size())
        os << "<data key=\"" << xml_escape(key) << "\">" << xml_escape(vals[v]) << "</data>";
    os << "</node>\n";
  }
  for (uint32_t e = 0; e < s.edges.size(); ++e) {
    os << "    <edge source=\"" << xml_escape(s.ids[s.edges[e].u]) << "\" target=\""
       << xml_escape(s.ids[s.edges[e].v]) << "\">";
    os << "<data key=\"length\">" << format_rat(s.edges[e].length) << "</data>";
    for (const auto& [key, vals] : ann.edge_attrs)
      if (e < vals.size())
        os << "<data key=\"" << xml_escape(key) << "\">" << xml_escape(vals[e]) << "</data>";
    os << "</edge>\n";
  }
  os << "  </graph>\n</graphml>\n";
  return os.str();
}

std::string emit_csv_matrix(const std::vector<std::string>& labels,
                            const std::vector<std::vector<std::string>>& cells) {
  std::ostringstream os;
  os << "id";
  for (const auto& l : labels) os << "," << l;
  os << "\n";
  for (size_t i = 0; i < cells.size(); ++i) {
    os << labels[i];
    for (const auto& c : cells[i]) os << "," << c;
    os << "\n";
  }
  return os.str();
}

}  // namespace ccgeo
