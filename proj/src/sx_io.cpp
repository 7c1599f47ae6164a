#include "sinex/sx_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>

#include "sinex/errors.hpp"
#include "sinex/numfmt.hpp"

namespace sinex {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
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

// ---------------------------------------------------------------------------
// Minimal XML reader for the SX subset: elements, attributes, character data,
// comments, XML prolog. No DTD, CDATA, processing instructions or namespaces
// beyond treating ':' as a name character.

struct XmlAttr {
  std::string name;
  std::string value;
};

struct XmlNode {
  std::string name;
  std::vector<XmlAttr> attrs;
  std::vector<XmlNode> children;
  std::string text;

  const std::string* attr(std::string_view n) const {
    for (const XmlAttr& a : attrs)
      if (a.name == n) return &a.value;
    return nullptr;
  }
};

struct XmlParser {
  std::string_view src;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    const auto line =
        1 + std::count(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
    throw MalformedXmlError("line " + std::to_string(line) + ": " + msg);
  }

  bool eof() const { return pos >= src.size(); }
  char peek() const { return pos < src.size() ? src[pos] : '\0'; }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool starts_with(std::string_view s) const { return src.substr(pos, s.size()) == s; }

  void expect(std::string_view s) {
    if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
    pos += s.size();
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
           c == ':';
  }

  std::string read_name() {
    const std::size_t start = pos;
    while (!eof() && name_char(src[pos])) ++pos;
    if (pos == start) fail("expected a name");
    return std::string(src.substr(start, pos - start));
  }

  std::string unescape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
      if (s[i] != '&') {
        out.push_back(s[i++]);
        continue;
      }
      const std::size_t semi = s.find(';', i);
      if (semi == std::string_view::npos) fail("unterminated entity");
      const std::string_view ent = s.substr(i + 1, semi - i - 1);
      if (ent == "amp")
        out.push_back('&');
      else if (ent == "lt")
        out.push_back('<');
      else if (ent == "gt")
        out.push_back('>');
      else if (ent == "quot")
        out.push_back('"');
      else if (ent == "apos")
        out.push_back('\'');
      else
        fail("unknown entity '&" + std::string(ent) + ";'");
      i = semi + 1;
    }
    return out;
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) {
        const std::size_t end = src.find("-->", pos + 4);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos = end + 3;
      } else if (starts_with("<?")) {
        const std::size_t end = src.find("?>", pos + 2);
        if (end == std::string_view::npos) fail("unterminated processing instruction");
        pos = end + 2;
      } else {
        return;
      }
    }
  }

  XmlAttr read_attr() {
    XmlAttr a;
    a.name = read_name();
    skip_ws();
    expect("=");
    skip_ws();
    const char quote = peek();
    if (quote != '"' && quote != '\'') fail("attribute value must be quoted");
    ++pos;
    const std::size_t end = src.find(quote, pos);
    if (end == std::string_view::npos) fail("unterminated attribute value");
    a.value = unescape(src.substr(pos, end - pos));
    pos = end + 1;
    return a;
  }

  XmlNode read_element() {
    expect("<");
    XmlNode node;
    node.name = read_name();
    for (;;) {
      skip_ws();
      if (starts_with("/>")) {
        pos += 2;
        return node;
      }
      if (starts_with(">")) {
        ++pos;
        break;
      }
      if (eof()) fail("unterminated start tag '" + node.name + "'");
      node.attrs.push_back(read_attr());
    }
    // Content until the matching end tag.
    for (;;) {
      const std::size_t lt = src.find('<', pos);
      if (lt == std::string_view::npos) fail("missing end tag for '" + node.name + "'");
      node.text += unescape(src.substr(pos, lt - pos));
      pos = lt;
      if (starts_with("<!--")) {
        const std::size_t end = src.find("-->", pos + 4);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos = end + 3;
      } else if (starts_with("</")) {
        pos += 2;
        const std::string closing = read_name();
        if (closing != node.name)
          fail("end tag '" + closing + "' does not match '" + node.name + "'");
        skip_ws();
        expect(">");
        return node;
      } else {
        node.children.push_back(read_element());
      }
    }
  }

  XmlNode parse_document() {
    skip_misc();
    if (eof()) fail("document has no root element");
    if (peek() != '<') fail("expected the root element");
    XmlNode root = read_element();
    skip_misc();
    if (!eof()) fail("trailing content after the root element");
    return root;
  }
};

// ---------------------------------------------------------------------------
// SX emission

constexpr std::string_view kSxNamespace = "http://www-verimag.imag.fr/xml-namespaces/sspaceex";
constexpr std::string_view kSxVersion = "0.2";

const char* bool_str(bool b) { return b ? "true" : "false"; }

void emit_param(const ParamDecl& p, std::string& out) {
  out += "    <param name=\"";
  out += xml_escape(p.name);
  out += "\" type=\"real\" local=\"";
  out += bool_str(p.local);
  out += "\" d1=\"1\" d2=\"1\" dynamics=\"";
  out += p.dynamics == Dynamics::any ? "any" : "const";
  out += "\" controlled=\"";
  out += bool_str(p.controlled);
  out += "\" />\n";
}

std::string render_flow(const std::vector<FlowEntry>& flow) {
  std::string text;
  for (std::size_t i = 0; i < flow.size(); ++i) {
    if (i) text += " & ";
    text += flow[i].var;
    text += "' == ";
    text += render_expr(flow[i].rhs);
  }
  return text;
}

void emit_location(const Location& loc, std::string& out) {
  out += "    <location id=\"";
  out += std::to_string(loc.id);
  out += "\" name=\"";
  out += xml_escape(loc.name);
  out += "\">\n      <flow>";
  out += xml_escape(render_flow(loc.flow));
  out += "</flow>\n    </location>\n";
}

void emit_base(const BaseComponent& c, std::string& out) {
  out += "  <component id=\"";
  out += xml_escape(c.id);
  out += "\">\n";
  for (const ParamDecl& p : c.params) emit_param(p, out);
  for (const Location& loc : c.locations) emit_location(loc, out);
  out += "  </component>\n";
}

void emit_network(const NetworkComponent& net, std::string& out) {
  out += "  <component id=\"";
  out += xml_escape(net.id);
  out += "\">\n";
  for (const ParamDecl& p : net.params) emit_param(p, out);
  for (const Bind& b : net.binds) {
    out += "    <bind component=\"";
    out += xml_escape(b.component);
    out += "\" as=\"";
    out += xml_escape(b.alias);
    out += "\">\n";
    for (const BindMapEntry& e : b.map) {
      out += "      <map key=\"";
      out += xml_escape(e.key);
      out += "\">";
      out += xml_escape(render_expr(e.actual));
      out += "</map>\n";
    }
    out += "    </bind>\n";
  }
  out += "  </component>\n";
}

// ---------------------------------------------------------------------------
// SX parsing

std::vector<FlowEntry> parse_flow_text(std::string_view text, const std::string& where) {
  std::vector<FlowEntry> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t amp = text.find('&', start);
    const std::string_view piece =
        trim(text.substr(start, amp == std::string_view::npos ? amp : amp - start));
    if (piece.empty()) throw UnsupportedSchemaError(where + ": empty conjunct in flow");
    const std::size_t prime = piece.find('\'');
    if (prime == std::string_view::npos)
      throw UnsupportedSchemaError(where + ": flow term has no primed variable: '" +
                                   std::string(piece) + "'");
    const std::string var(trim(piece.substr(0, prime)));
    if (!is_identifier(var))
      throw UnsupportedSchemaError(where + ": bad flow variable '" + var + "'");
    std::string_view rest = trim(piece.substr(prime + 1));
    if (rest.substr(0, 2) != "==")
      throw UnsupportedSchemaError(where + ": flow term for '" + var + "' lacks '=='");
    rest = trim(rest.substr(2));
    ExprPtr rhs;
    try {
      rhs = parse_expr(rest);
    } catch (const InvalidArgument& e) {
      throw UnsupportedSchemaError(where + ": flow for '" + var + "': " + e.what());
    }
    out.push_back({var, std::move(rhs)});
    if (amp == std::string_view::npos) break;
    start = amp + 1;
  }
  return out;
}

ExprPtr parse_actual(std::string_view raw, const std::string& where) {
  const std::string_view t = trim(raw);
  if (is_identifier(t)) return ident(std::string(t));
  if (parse_double(t)) return lit(std::string(t));
  throw UnsupportedSchemaError(where + ": bind actual must be an identifier or a number, got '" +
                               std::string(raw) + "'");
}

bool parse_bool_attr(const XmlNode& n, const char* name, bool dflt, ValidationReport& rep,
                     const std::string& where) {
  const std::string* v = n.attr(name);
  if (!v) return dflt;
  if (*v == "true") return true;
  if (*v == "false") return false;
  rep.add_warning(where, std::string("unrecognized ") + name + "='" + *v + "', using " +
                             bool_str(dflt));
  return dflt;
}

const std::string& require_attr(const XmlNode& n, const char* name, const std::string& where) {
  const std::string* v = n.attr(name);
  if (!v)
    throw UnsupportedSchemaError(where + ": <" + n.name + "> lacks required attribute '" + name +
                                 "'");
  return *v;
}

void warn_unknown_attrs(const XmlNode& n, std::initializer_list<std::string_view> known,
                        ValidationReport& rep, const std::string& where) {
  std::string positions;
  std::string unknown;
  for (const XmlAttr& a : n.attrs) {
    if (std::find(known.begin(), known.end(), a.name) != known.end()) continue;
    const bool is_position =
        a.name == "x" || a.name == "y" || a.name == "width" || a.name == "height";
    std::string& bucket = is_position ? positions : unknown;
    if (!bucket.empty()) bucket += ", ";
    bucket += a.name;
  }
  if (!positions.empty()) rep.add_warning(where, "position attributes ignored: " + positions);
  if (!unknown.empty()) rep.add_warning(where, "unknown attributes ignored: " + unknown);
}

ParamDecl parse_param(const XmlNode& n, ValidationReport& rep, const std::string& cwhere) {
  ParamDecl p;
  p.name = require_attr(n, "name", cwhere);
  const std::string where = cwhere + "/param " + p.name;
  warn_unknown_attrs(n, {"name", "type", "local", "d1", "d2", "dynamics", "controlled"}, rep,
                     where);
  if (const std::string* type = n.attr("type"); type && *type != "real")
    rep.add_warning(where, "param type '" + *type + "' unsupported, treated as real");
  for (const char* d : {"d1", "d2"})
    if (const std::string* v = n.attr(d); v && *v != "1")
      rep.add_warning(where, "multi-dimensional params unsupported, " + std::string(d) + "='" +
                                 *v + "' ignored");
  p.local = parse_bool_attr(n, "local", false, rep, where);
  p.controlled = parse_bool_attr(n, "controlled", true, rep, where);
  if (const std::string* dyn = n.attr("dynamics"); dyn && *dyn == "const") {
    p.dynamics = Dynamics::constant;
    p.kind = ParamKind::constant;
  } else {
    if (const std::string* dyn = n.attr("dynamics"); dyn && *dyn != "any")
      rep.add_warning(where, "dynamics '" + *dyn + "' unsupported, treated as any");
    p.dynamics = Dynamics::any;
    p.kind = ParamKind::variable;
  }
  return p;
}

Location parse_location(const XmlNode& n, ValidationReport& rep, const std::string& cwhere) {
  Location loc;
  const std::string& id_text = require_attr(n, "id", cwhere);
  int id = 0;
  auto res = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
  if (res.ec != std::errc{} || res.ptr != id_text.data() + id_text.size())
    throw UnsupportedSchemaError(cwhere + ": location id '" + id_text + "' is not an integer");
  loc.id = id;
  loc.name = require_attr(n, "name", cwhere);
  const std::string where = cwhere + "/location " + loc.name;
  warn_unknown_attrs(n, {"id", "name"}, rep, where);
  bool seen_flow = false;
  for (const XmlNode& child : n.children) {
    if (child.name == "flow") {
      if (seen_flow) throw UnsupportedSchemaError(where + ": multiple <flow> elements");
      seen_flow = true;
      loc.flow = parse_flow_text(child.text, where);
    } else if (child.name == "invariant") {
      rep.add_warning(where, "invariant dropped: '" + std::string(trim(child.text)) + "'");
    } else if (child.name == "note") {
      rep.add_warning(where, "note dropped");
    } else {
      rep.add_warning(where, "element <" + child.name + "> ignored");
    }
  }
  return loc;
}

Bind parse_bind(const XmlNode& n, ValidationReport& rep, const std::string& cwhere) {
  Bind b;
  b.component = require_attr(n, "component", cwhere);
  b.alias = require_attr(n, "as", cwhere);
  const std::string where = cwhere + "/bind " + b.alias;
  warn_unknown_attrs(n, {"component", "as"}, rep, where);
  for (const XmlNode& child : n.children) {
    if (child.name == "map") {
      const std::string& key = require_attr(child, "key", where);
      b.map.push_back({key, parse_actual(child.text, where + "/map " + key)});
    } else if (child.name == "note") {
      rep.add_warning(where, "note dropped");
    } else {
      rep.add_warning(where, "element <" + child.name + "> ignored");
    }
  }
  return b;
}

struct ParsedComponent {
  std::string id;
  std::vector<ParamDecl> params;
  std::vector<Location> locations;
  std::vector<Bind> binds;
};

ParsedComponent parse_component(const XmlNode& n, ValidationReport& rep) {
  ParsedComponent c;
  c.id = require_attr(n, "id", "document");
  const std::string where = "component " + c.id;
  warn_unknown_attrs(n, {"id"}, rep, where);
  for (const XmlNode& child : n.children) {
    if (child.name == "param") {
      c.params.push_back(parse_param(child, rep, where));
    } else if (child.name == "location") {
      c.locations.push_back(parse_location(child, rep, where));
    } else if (child.name == "bind") {
      c.binds.push_back(parse_bind(child, rep, where));
    } else if (child.name == "transition") {
      rep.add_warning(where, "transition dropped");
    } else if (child.name == "note") {
      rep.add_warning(where, "note dropped");
    } else {
      rep.add_warning(where, "element <" + child.name + "> ignored");
    }
  }
  return c;
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::stc: return "stc";
    case Scenario::lgg: return "lgg";
    case Scenario::supp: return "supp";
  }
  throw InvalidArgument("bad scenario value");
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::gen: return "GEN";
    case OutputFormat::txt: return "TXT";
    case OutputFormat::intv: return "INTV";
  }
  throw InvalidArgument("bad output format value");
}

std::string emit_sx(const Model& m) {
  const ValidationReport report = validate_model(m);
  if (!report.ok) {
    for (const Issue& issue : report.issues)
      if (issue.severity == Severity::error)
        throw InvalidModelError("cannot serialize invalid model: " + issue.path + ": " +
                                issue.message);
  }
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<sspaceex xmlns=\"";
  out += kSxNamespace;
  out += "\" version=\"";
  out += kSxVersion;
  out += "\">\n";
  for (const BaseComponent& c : m.components) emit_base(c, out);
  if (m.network) emit_network(*m.network, out);
  out += "</sspaceex>\n";
  return out;
}

SxParseResult parse_sx(std::string_view doc) {
  XmlParser parser{doc};
  const XmlNode root = parser.parse_document();
  if (root.name != "sspaceex")
    throw UnsupportedSchemaError("root element is <" + root.name + ">, expected <sspaceex>");

  SxParseResult res;
  if (const std::string* version = root.attr("version"); version && *version != kSxVersion)
    res.report.add_warning("document", "schema version '" + *version + "' differs from '" +
                                           std::string(kSxVersion) + "'");

  std::vector<ParsedComponent> networks;
  for (const XmlNode& child : root.children) {
    if (child.name != "component") {
      res.report.add_warning("document", "element <" + child.name + "> ignored");
      continue;
    }
    ParsedComponent pc = parse_component(child, res.report);
    if (!pc.binds.empty()) {
      if (!pc.locations.empty())
        res.report.add_warning("component " + pc.id,
                               "locations ignored in a component with binds");
      networks.push_back(std::move(pc));
    } else {
      BaseComponent base;
      base.id = std::move(pc.id);
      base.params = std::move(pc.params);
      base.locations = std::move(pc.locations);
      res.model.components.push_back(std::move(base));
    }
  }

  if (networks.empty()) {
    res.report.add_warning("document", "no network component");
  } else {
    for (std::size_t i = 0; i + 1 < networks.size(); ++i)
      res.report.add_warning("component " + networks[i].id,
                             "multiple network components; only the last one is kept");
    ParsedComponent& net = networks.back();
    NetworkComponent network;
    network.id = std::move(net.id);
    network.params = std::move(net.params);
    network.binds = std::move(net.binds);
    res.model.network = std::move(network);
  }
  return res;
}

namespace {

void append_interval(std::vector<std::string>& conj, const std::string& var, Interval iv) {
  if (iv.lo == iv.hi) {
    conj.push_back(var + "==" + format_double(iv.lo));
  } else {
    conj.push_back(var + ">=" + format_double(iv.lo));
    conj.push_back(var + "<=" + format_double(iv.hi));
  }
}

}  // namespace

std::string initially_predicate(const StateBox& init, const std::string& sine_alias,
                                const std::string& clock_var) {
  std::vector<std::string> conj;
  append_interval(conj, sine_alias + ".x", init.x);
  append_interval(conj, "y", init.y);
  append_interval(conj, sine_alias + ".t", init.t);
  append_interval(conj, clock_var, Interval{0.0, 0.0});
  std::string out;
  for (std::size_t i = 0; i < conj.size(); ++i) {
    if (i) out += " & ";
    out += conj[i];
  }
  return out;
}

std::string emit_cfg(const AnalysisConfig& c) {
  if (!(c.flowpipe_tolerance > 0.0)) throw InvalidArgument("flowpipe tolerance must be > 0");
  if (!(c.time_horizon > 0.0)) throw InvalidArgument("time horizon must be > 0");
  if (c.output_variables.empty()) throw InvalidArgument("output variables must be nonempty");
  std::string out;
  out += "system = " + c.system + "\n";
  out += "initially = \"" + c.initially + "\"\n";
  out += "scenario = " + to_string(c.scenario) + "\n";
  out += "flowpipe-tolerance = " + format_double(c.flowpipe_tolerance) + "\n";
  out += "time-horizon = " + format_double(c.time_horizon) + "\n";
  out += "iter-max = " + std::to_string(c.iter_max) + "\n";
  out += "output-variables = ";
  for (std::size_t i = 0; i < c.output_variables.size(); ++i) {
    if (i) out += ", ";
    out += c.output_variables[i];
  }
  out += "\noutput-format = " + to_string(c.output_format) + "\n";
  return out;
}

std::vector<Polygon> parse_gen(std::string_view doc) {
  std::vector<Polygon> polys;
  Polygon current;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= doc.size()) {
    if (pos == doc.size() && lineno > 0 && doc.back() == '\n') break;
    std::size_t nl = doc.find('\n', pos);
    if (nl == std::string_view::npos) nl = doc.size();
    std::string_view line = doc.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++lineno;
    pos = nl + 1;

    const std::string_view body = trim(line);
    if (body.empty()) {
      if (!current.vertices.empty()) {
        polys.push_back(std::move(current));
        current = {};
      }
      continue;
    }
    const std::size_t split = body.find_first_of(" \t");
    const std::string_view first = split == std::string_view::npos ? body : body.substr(0, split);
    const std::string_view second =
        split == std::string_view::npos ? std::string_view{} : trim(body.substr(split));
    const auto x = parse_double(first);
    const auto y = parse_double(second);
    if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y))
      throw GenParseError(lineno, "expected two finite numbers, got '" + std::string(line) + "'");
    current.vertices.push_back({*x, *y});
  }
  if (!current.vertices.empty()) polys.push_back(std::move(current));
  return polys;
}

std::string emit_gen(const std::vector<Polygon>& polys) {
  std::string out;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (i) out += "\n";
    for (const Point2& v : polys[i].vertices) {
      out += format_double(v.x);
      out += " ";
      out += format_double(v.y);
      out += "\n";
    }
  }
  return out;
}

}  // namespace sinex
