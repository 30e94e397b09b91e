#include "esbid/mps.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace esbid {

namespace {

constexpr int kNameW = 24;
constexpr const char* kObjRow = "OBJ";

std::string num(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void pad_to(std::string& line, size_t col) {
  if (line.size() < col) line.append(col - line.size(), ' ');
}

void field(std::string& line, size_t col, const std::string& s) {
  pad_to(line, col);
  line += s;
}

std::string data_line(const std::string& f1, const std::string& f2,
                      const std::string& f3 = "", const std::string& f4 = "") {
  std::string line = " ";
  field(line, 1, f1);
  field(line, 4, f2);
  if (!f3.empty()) field(line, 4 + kNameW + 2, f3);
  if (!f4.empty()) field(line, 4 + 2 * (kNameW + 2), f4);
  return line + "\n";
}

void check_name(const std::string& n) {
  if (n.size() > kNameW)
    throw ModelError("name too long for MPS export: " + n);
  for (char c : n)
    if (c == ' ' || c == '\t')
      throw ModelError("name contains whitespace, not exportable: " + n);
}

}  // namespace

std::string export_mps(const LinearModel& model, const std::string& name) {
  model.validate();
  if (model.row_index(kObjRow) >= 0)
    throw ModelError("row name OBJ is reserved by the MPS exporter");
  for (const Variable& v : model.vars()) check_name(v.name);
  for (const Constraint& c : model.rows()) check_name(c.name);

  std::string out;
  out += "NAME";
  {
    std::string l;
    field(l, 10, name);
    out += l + "\n";
  }
  if (model.objective_sense() == ObjSense::Maximize) {
    out += "OBJSENSE\n";
    out += data_line("", "MAX");
  }
  out += "ROWS\n";
  out += data_line("N", kObjRow);
  for (const Constraint& c : model.rows()) {
    const char* s = c.sense == RowSense::LE ? "L"
                    : c.sense == RowSense::GE ? "G"
                                              : "E";
    out += data_line(s, c.name);
  }

  // gather column entries (objective first, then rows in order)
  std::vector<std::vector<std::pair<std::string, double>>> entries(
      model.num_vars());
  for (int j = 0; j < model.num_vars(); ++j) {
    const double c = model.objective_coef(j);
    if (c != 0.0) entries[j].push_back({kObjRow, c});
  }
  for (const Constraint& c : model.rows())
    for (const Term& t : c.terms) entries[t.var].push_back({c.name, t.coef});

  out += "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < model.num_vars(); ++j) {
    const Variable& v = model.var(j);
    const bool want_int = v.kind == VarKind::Binary;
    if (want_int != in_int) {
      char mk[16];
      std::snprintf(mk, sizeof mk, "MK%06d", ++marker);
      out += data_line("", mk, "'MARKER'", want_int ? "'INTORG'" : "'INTEND'");
      in_int = want_int;
    }
    if (entries[j].empty()) {
      // keep empty columns alive with an explicit zero objective entry
      out += data_line("", v.name, kObjRow, num(0.0));
      continue;
    }
    for (const auto& [row, coef] : entries[j])
      out += data_line("", v.name, row, num(coef));
  }
  if (in_int) {
    char mk[16];
    std::snprintf(mk, sizeof mk, "MK%06d", ++marker);
    out += data_line("", mk, "'MARKER'", "'INTEND'");
  }

  out += "RHS\n";
  if (model.objective_offset() != 0.0)
    out += data_line("", "RHS1", kObjRow, num(-model.objective_offset()));
  for (const Constraint& c : model.rows())
    if (c.rhs != 0.0) out += data_line("", "RHS1", c.name, num(c.rhs));

  out += "BOUNDS\n";
  for (const Variable& v : model.vars()) {
    if (v.kind == VarKind::Binary) {
      out += data_line("BV", "BND1", v.name);
      if (v.lb == v.ub) {
        out += data_line("FX", "BND1", v.name, num(v.lb));
      } else {
        if (v.lb > 0.0) out += data_line("LO", "BND1", v.name, num(v.lb));
        if (v.ub < 1.0) out += data_line("UP", "BND1", v.name, num(v.ub));
      }
      continue;
    }
    const bool lb_def = (v.lb == 0.0);
    const bool ub_def = !std::isfinite(v.ub);
    if (lb_def && ub_def) continue;
    if (v.lb == v.ub) {
      out += data_line("FX", "BND1", v.name, num(v.lb));
      continue;
    }
    if (!std::isfinite(v.lb) && ub_def) {
      out += data_line("FR", "BND1", v.name);
      continue;
    }
    if (!std::isfinite(v.lb))
      out += data_line("MI", "BND1", v.name);
    else if (!lb_def)
      out += data_line("LO", "BND1", v.name, num(v.lb));
    if (!ub_def) out += data_line("UP", "BND1", v.name, num(v.ub));
  }
  out += "ENDATA\n";
  return out;
}

namespace {

struct Tok {
  std::vector<std::string> f;
  int lineno = 0;
};

double parse_num(const std::string& s, int lineno) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("mps line " + std::to_string(lineno) +
                     ": expected a number, got '" + s + "'");
  }
}

}  // namespace

LinearModel import_mps(const std::string& text) {
  LinearModel m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::string section;
  bool in_int = false;
  bool seen_endata = false;
  std::string pending_objsense;
  struct RowInfo {
    RowSense sense;
    bool is_obj;
  };
  std::vector<std::string> obj_pending_name;
  std::string objname;
  std::vector<Tok> ranges;  // processed after all rows exist

  auto require_fields = [&](const Tok& t, size_t n, const char* what) {
    if (t.f.size() < n)
      throw ParseError("mps line " + std::to_string(t.lineno) +
                       ": truncated " + std::string(what) + " line");
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    const bool is_header = line[0] != ' ' && line[0] != '\t';
    Tok tok;
    tok.lineno = lineno;
    {
      std::istringstream ls(line);
      std::string w;
      while (ls >> w) tok.f.push_back(w);
    }
    if (tok.f.empty()) continue;

    if (is_header) {
      section = tok.f[0];
      if (section == "NAME") continue;
      if (section == "ENDATA") {
        seen_endata = true;
        break;
      }
      if (section != "OBJSENSE" && section != "ROWS" && section != "COLUMNS" &&
          section != "RHS" && section != "RANGES" && section != "BOUNDS")
        throw ParseError("mps line " + std::to_string(lineno) +
                         ": unknown section '" + section + "'");
      // OBJSENSE may carry its value on the same line
      if (section == "OBJSENSE" && tok.f.size() > 1)
        pending_objsense = tok.f[1];
      continue;
    }

    if (section == "OBJSENSE") {
      pending_objsense = tok.f[0];
    } else if (section == "ROWS") {
      require_fields(tok, 2, "ROWS");
      const std::string& kind = tok.f[0];
      const std::string& rname = tok.f[1];
      if (kind == "N") {
        if (objname.empty()) objname = rname;
        // additional N rows are ignored (free rows)
      } else if (kind == "L") {
        m.add_row(rname, {}, RowSense::LE, 0.0);
      } else if (kind == "G") {
        m.add_row(rname, {}, RowSense::GE, 0.0);
      } else if (kind == "E") {
        m.add_row(rname, {}, RowSense::EQ, 0.0);
      } else {
        throw ParseError("mps line " + std::to_string(lineno) +
                         ": unknown row type '" + kind + "'");
      }
    } else if (section == "COLUMNS") {
      if (tok.f.size() >= 3 &&
          (tok.f[1] == "'MARKER'" || (tok.f.size() >= 4 && tok.f[2] == "'MARKER'"))) {
        bool org = false, end = false;
        for (const std::string& w : tok.f) {
          if (w == "'INTORG'") org = true;
          if (w == "'INTEND'") end = true;
        }
        if (org == end)
          throw ParseError("mps line " + std::to_string(lineno) +
                           ": marker without INTORG/INTEND");
        in_int = org;
        continue;
      }
      require_fields(tok, 3, "COLUMNS");
      if ((tok.f.size() - 1) % 2 != 0)
        throw ParseError("mps line " + std::to_string(lineno) +
                         ": truncated COLUMNS line");
      const std::string& cname = tok.f[0];
      int j = m.var_index(cname);
      if (j < 0)
        j = m.add_var(cname, in_int ? VarKind::Binary : VarKind::Continuous,
                      0.0, in_int ? 1.0 : kInf);
      for (size_t k = 1; k + 1 < tok.f.size(); k += 2) {
        const std::string& rname = tok.f[k];
        const double v = parse_num(tok.f[k + 1], lineno);
        if (rname == objname) {
          m.add_objective_term(j, v);
          continue;
        }
        const int r = m.row_index(rname);
        if (r < 0)
          throw ParseError("mps line " + std::to_string(lineno) +
                           ": unknown row '" + rname + "'");
        m.row_mut(r).terms.push_back({j, v});
      }
    } else if (section == "RHS") {
      require_fields(tok, 3, "RHS");
      // fields: setname (rowname value)+
      if ((tok.f.size() - 1) % 2 != 0)
        throw ParseError("mps line " + std::to_string(lineno) +
                         ": truncated RHS line");
      for (size_t k = 1; k + 1 < tok.f.size(); k += 2) {
        const std::string& rname = tok.f[k];
        const double v = parse_num(tok.f[k + 1], lineno);
        if (rname == objname) {
          m.set_objective_offset(-v);
          continue;
        }
        const int r = m.row_index(rname);
        if (r < 0)
          throw ParseError("mps line " + std::to_string(lineno) +
                           ": unknown row '" + rname + "' in RHS");
        m.row_mut(r).rhs = v;
      }
    } else if (section == "RANGES") {
      require_fields(tok, 3, "RANGES");
      ranges.push_back(tok);
    } else if (section == "BOUNDS") {
      require_fields(tok, 3, "BOUNDS");
      const std::string& kind = tok.f[0];
      const std::string& cname = tok.f[2];
      int j = m.var_index(cname);
      if (j < 0)
        throw ParseError("mps line " + std::to_string(lineno) +
                         ": unknown column '" + cname + "' in BOUNDS");
      Variable& v = m.var(j);
      auto needval = [&]() -> double {
        if (tok.f.size() < 4)
          throw ParseError("mps line " + std::to_string(lineno) +
                           ": bound type " + kind + " needs a value");
        return parse_num(tok.f[3], lineno);
      };
      if (kind == "UP") v.ub = needval();
      else if (kind == "LO") v.lb = needval();
      else if (kind == "FX") { const double x = needval(); v.lb = v.ub = x; }
      else if (kind == "FR") { v.lb = -kInf; v.ub = kInf; }
      else if (kind == "MI") v.lb = -kInf;
      else if (kind == "PL") v.ub = kInf;
      else if (kind == "BV") { v.kind = VarKind::Binary; v.lb = 0.0; v.ub = 1.0; }
      else
        throw ParseError("mps line " + std::to_string(lineno) +
                         ": unknown bound type '" + kind + "'");
    } else if (section.empty()) {
      throw ParseError("mps line " + std::to_string(lineno) +
                       ": data before any section header");
    }
  }
  if (!seen_endata)
    throw ParseError("mps line " + std::to_string(lineno) +
                     ": missing ENDATA");
  if (pending_objsense == "MAX" || pending_objsense == "MAXIMIZE")
    m.set_objective_sense(ObjSense::Maximize);

  for (const Tok& t : ranges) {
    for (size_t k = 1; k + 1 < t.f.size(); k += 2) {
      const std::string& rname = t.f[k];
      const double rng = parse_num(t.f[k + 1], t.lineno);
      const int r = m.row_index(rname);
      if (r < 0)
        throw ParseError("mps line " + std::to_string(t.lineno) +
                         ": unknown row '" + rname + "' in RANGES");
      Constraint& c = m.row_mut(r);
      double lo = 0.0, hi = 0.0;
      switch (c.sense) {
        case RowSense::LE: hi = c.rhs; lo = c.rhs - std::fabs(rng); break;
        case RowSense::GE: lo = c.rhs; hi = c.rhs + std::fabs(rng); break;
        case RowSense::EQ:
          if (rng >= 0) { lo = c.rhs; hi = c.rhs + rng; }
          else { lo = c.rhs + rng; hi = c.rhs; }
          break;
      }
      if (c.sense == RowSense::EQ) {
        c.sense = RowSense::LE;
        c.rhs = hi;
        m.add_row(rname + "__rng", m.row(r).terms, RowSense::GE, lo);
      } else if (c.sense == RowSense::LE) {
        m.add_row(rname + "__rng", m.row(r).terms, RowSense::GE, lo);
      } else {
        m.add_row(rname + "__rng", m.row(r).terms, RowSense::LE, hi);
      }
    }
  }
  m.validate();
  return m;
}

}  // namespace esbid
