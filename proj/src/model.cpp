#include "sinex/model.hpp"

#include <algorithm>
#include <set>

#include "sinex/numfmt.hpp"

namespace sinex {

ParamDecl variable_param(std::string name, bool controlled, bool local) {
  return ParamDecl{std::move(name), ParamKind::variable, controlled, local, Dynamics::any};
}

ParamDecl constant_param(std::string name, bool controlled, bool local) {
  return ParamDecl{std::move(name), ParamKind::constant, controlled, local, Dynamics::constant};
}

bool operator==(const FlowEntry& a, const FlowEntry& b) {
  return a.var == b.var && expr_equal(a.rhs, b.rhs);
}

bool operator==(const Location& a, const Location& b) {
  return a.id == b.id && a.name == b.name && a.flow == b.flow &&
         expr_equal(a.invariant, b.invariant);
}

bool operator==(const BaseComponent& a, const BaseComponent& b) {
  return a.id == b.id && a.params == b.params && a.locations == b.locations &&
         a.transitions == b.transitions;
}

bool operator==(const BindMapEntry& a, const BindMapEntry& b) {
  return a.key == b.key && expr_equal(a.actual, b.actual);
}

bool operator==(const Bind& a, const Bind& b) {
  return a.component == b.component && a.alias == b.alias && a.map == b.map;
}

bool operator==(const NetworkComponent& a, const NetworkComponent& b) {
  return a.id == b.id && a.params == b.params && a.binds == b.binds;
}

bool operator==(const Model& a, const Model& b) {
  return a.components == b.components && a.network == b.network;
}

bool actual_is_numeric(const ExprPtr& actual) {
  if (!actual) return false;
  if (actual->kind == ExprKind::literal) return true;
  return actual->kind == ExprKind::negate && actual->lhs &&
         actual->lhs->kind == ExprKind::literal;
}

bool actual_is_identifier(const ExprPtr& actual) {
  return actual && actual->kind == ExprKind::identifier;
}

const ParamDecl* BaseComponent::find_param(const std::string& name) const {
  for (const ParamDecl& p : params)
    if (p.name == name) return &p;
  return nullptr;
}

const BaseComponent* Model::find_component(const std::string& id) const {
  for (const BaseComponent& c : components)
    if (c.id == id) return &c;
  return nullptr;
}

void ValidationReport::add_error(std::string path, std::string message) {
  issues.push_back({Severity::error, std::move(path), std::move(message)});
  ok = false;
}

void ValidationReport::add_warning(std::string path, std::string message) {
  issues.push_back({Severity::warning, std::move(path), std::move(message)});
}

void ValidationReport::merge(const ValidationReport& other) {
  issues.insert(issues.end(), other.issues.begin(), other.issues.end());
  ok = ok && other.ok;
}

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(
      std::count_if(issues.begin(), issues.end(),
                    [](const Issue& i) { return i.severity == Severity::error; }));
}

namespace {

void check_params(const std::vector<ParamDecl>& params, const std::string& path,
                  ValidationReport& r) {
  std::set<std::string> seen;
  for (const ParamDecl& p : params) {
    const std::string ppath = path + "/param " + p.name;
    if (!is_identifier(p.name)) r.add_error(ppath, "param name is not an identifier");
    if (!seen.insert(p.name).second) r.add_error(ppath, "duplicate param name");
    const bool consistent = (p.kind == ParamKind::variable) == (p.dynamics == Dynamics::any);
    if (!consistent)
      r.add_error(ppath, p.kind == ParamKind::variable
                             ? "variable param must have dynamics 'any'"
                             : "constant param must have dynamics 'const'");
  }
}

}  // namespace

ValidationReport validate_component(const BaseComponent& c) {
  ValidationReport r;
  const std::string path = "component " + c.id;
  if (!is_identifier(c.id)) r.add_error(path, "component id is not an identifier");
  check_params(c.params, path, r);
  if (c.locations.empty()) r.add_error(path, "component has no location");
  if (!c.transitions.empty())
    r.add_error(path, "transitions are not supported in this model subset");

  for (const Location& loc : c.locations) {
    const std::string lpath = path + "/location " + loc.name;
    if (loc.id <= 0) r.add_error(lpath, "location id must be positive");
    if (!is_identifier(loc.name)) r.add_error(lpath, "location name is not an identifier");
    if (loc.invariant) r.add_warning(lpath, "location invariant is ignored");

    std::set<std::string> flowed;
    for (const FlowEntry& f : loc.flow) {
      const std::string fpath = lpath + "/flow " + f.var;
      if (!flowed.insert(f.var).second) r.add_error(fpath, "duplicate flow equation");
      const ParamDecl* p = c.find_param(f.var);
      if (!p) {
        r.add_error(fpath, "flow defined for undeclared name '" + f.var + "'");
      } else if (p->kind != ParamKind::variable || !p->controlled) {
        r.add_error(fpath, "flow defined for non-controlled parameter '" + f.var + "'");
      }
      if (!f.rhs) {
        r.add_error(fpath, "flow has no right-hand side");
        continue;
      }
      for (const std::string& id : collect_identifiers(f.rhs))
        if (!c.find_param(id))
          r.add_error(fpath, "expression references undeclared param '" + id + "'");
    }
    for (const ParamDecl& p : c.params)
      if (p.kind == ParamKind::variable && p.controlled && flowed.count(p.name) == 0)
        r.add_error(lpath, "controlled variable '" + p.name + "' has no flow equation");
  }

  // Unused params are legal for SpaceEx but usually a generator bug.
  std::set<std::string> used;
  for (const Location& loc : c.locations)
    for (const FlowEntry& f : loc.flow) {
      used.insert(f.var);
      if (f.rhs)
        for (const std::string& id : collect_identifiers(f.rhs)) used.insert(id);
    }
  for (const ParamDecl& p : c.params)
    if (used.count(p.name) == 0)
      r.add_warning(path + "/param " + p.name, "param is never used in any flow");

  return r;
}

ValidationReport validate_model(const Model& m) {
  ValidationReport r;
  std::set<std::string> ids;
  for (const BaseComponent& c : m.components) {
    if (!ids.insert(c.id).second)
      r.add_error("component " + c.id, "duplicate component id");
    r.merge(validate_component(c));
  }
  if (!m.network) return r;

  const NetworkComponent& net = *m.network;
  const std::string path = "network " + net.id;
  if (!is_identifier(net.id)) r.add_error(path, "network id is not an identifier");
  if (ids.count(net.id)) r.add_error(path, "network id collides with a component id");
  check_params(net.params, path, r);

  std::set<std::string> aliases;
  for (const Bind& b : net.binds) {
    const std::string bpath = path + "/bind " + b.alias;
    if (!is_identifier(b.alias)) r.add_error(bpath, "bind alias is not an identifier");
    if (!aliases.insert(b.alias).second) r.add_error(bpath, "duplicate bind alias");
    const BaseComponent* target = m.find_component(b.component);
    if (!target) {
      r.add_error(bpath, "bind references unknown component '" + b.component + "'");
      continue;
    }
    std::set<std::string> mapped;
    for (const BindMapEntry& e : b.map) {
      const std::string epath = bpath + "/map " + e.key;
      if (!mapped.insert(e.key).second) r.add_error(epath, "formal bound twice");
      const ParamDecl* formal = target->find_param(e.key);
      if (!formal) {
        r.add_error(epath, "map names unknown formal '" + e.key + "'");
        continue;
      }
      if (formal->local) r.add_error(epath, "local formal '" + e.key + "' cannot be bound");
      if (actual_is_numeric(e.actual)) {
        if (formal->kind != ParamKind::constant)
          r.add_error(epath, "numeric literal bound to variable formal '" + e.key + "'");
      } else if (actual_is_identifier(e.actual)) {
        const std::string& name = e.actual->text;
        const bool declared = std::any_of(net.params.begin(), net.params.end(),
                                          [&](const ParamDecl& p) { return p.name == name; });
        if (!declared)
          r.add_error(epath, "actual '" + name + "' is not declared in the network");
      } else {
        r.add_error(epath, "actual must be an identifier or a numeric literal");
      }
    }
    for (const ParamDecl& p : target->params)
      if (!p.local && mapped.count(p.name) == 0)
        r.add_error(bpath, "non-local formal '" + p.name + "' is not bound");
  }
  return r;
}

}  // namespace sinex
