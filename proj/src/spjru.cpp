#include "dbmorph/spjru.hpp"

#include <algorithm>
#include <set>

#include "dbmorph/errors.hpp"

namespace dbmorph {

namespace {

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

void check_column(std::size_t c, std::size_t arity) {
  if (c == 0 || c > arity)
    throw IndexError("column " + std::to_string(c) + " outside 1.." + std::to_string(arity));
}

Table select_const_table(const Table& t, std::size_t c, const Value& v) {
  check_column(c, t.arity);
  Table out{t.arity, {}};
  for (const auto& r : t.rows)
    if (r[c - 1] == v) out.rows.insert(r);
  return out;
}

Table select_cols_table(const Table& t, std::size_t c1, std::size_t c2) {
  check_column(c1, t.arity);
  check_column(c2, t.arity);
  Table out{t.arity, {}};
  for (const auto& r : t.rows)
    if (r[c1 - 1] == r[c2 - 1]) out.rows.insert(r);
  return out;
}

Table swap_table(const Table& t, std::size_t c1, std::size_t c2) {
  check_column(c1, t.arity);
  check_column(c2, t.arity);
  Table out{t.arity, {}};
  for (auto r : t.rows) {
    std::swap(r[c1 - 1], r[c2 - 1]);
    out.rows.insert(std::move(r));
  }
  return out;
}

Table product_table(const Table& a, const Table& b) {
  Table out{a.arity + b.arity, {}};
  for (const auto& x : a.rows)
    for (const auto& y : b.rows) {
      Tuple r = x;
      r.insert(r.end(), y.begin(), y.end());
      out.rows.insert(std::move(r));
    }
  return out;
}

Table union_table(const Table& a, const Table& b) {
  if (a.arity != b.arity) throw SchemaError("union of relations with different arities");
  Table out = a;
  out.rows.insert(b.rows.begin(), b.rows.end());
  return out;
}

// Increasing proper, nonempty subsequences of 1..n.
std::vector<std::vector<std::size_t>> proper_subsequences(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t full = (std::size_t{1} << n) - 1;
  for (std::size_t mask = 1; mask < full; ++mask) {
    std::vector<std::size_t> p;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) p.push_back(i + 1);
    out.push_back(std::move(p));
  }
  return out;
}

struct Job {
  Job(Expr::Kind k, std::size_t x, std::size_t y = 0) : kind(k), a(x), b(y) {}

  Expr::Kind kind;
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t column = 0;
  std::size_t column2 = 0;
  Value constant;
  std::vector<std::size_t> positions;
};

Table run_job(const Job& j, const std::vector<ClosureEntry>& entries) {
  const Table& a = entries[j.a].table;
  switch (j.kind) {
    case Expr::Kind::SelectConst: return select_const_table(a, j.column, j.constant);
    case Expr::Kind::SelectCols: return select_cols_table(a, j.column, j.column2);
    case Expr::Kind::Project: return project(a, j.positions);
    case Expr::Kind::Swap: return swap_table(a, j.column, j.column2);
    case Expr::Kind::Product: return product_table(a, entries[j.b].table);
    case Expr::Kind::Union: return union_table(a, entries[j.b].table);
    case Expr::Kind::Generator: break;
  }
  return a;
}

ExprPtr job_expr(const Job& j, const std::vector<ClosureEntry>& entries) {
  const ExprPtr& a = entries[j.a].expr;
  switch (j.kind) {
    case Expr::Kind::SelectConst: return select_const(a, j.column, j.constant);
    case Expr::Kind::SelectCols: return select_cols(a, j.column, j.column2);
    case Expr::Kind::Project: return project_expr(a, j.positions);
    case Expr::Kind::Swap: return swap_expr(a, j.column, j.column2);
    case Expr::Kind::Product: return product_expr(a, entries[j.b].expr);
    case Expr::Kind::Union: return union_expr(a, entries[j.b].expr);
    case Expr::Kind::Generator: break;
  }
  return a;
}

// Emits candidate jobs for one breadth-first level; returns false when the
// budget ran out before all candidates were emitted.
class JobGenerator {
 public:
  JobGenerator(const std::vector<ClosureEntry>& entries, std::size_t max_arity, std::size_t budget)
      : entries_(entries), max_arity_(max_arity), budget_(budget) {}

  bool run(std::size_t frontier_begin, std::size_t frontier_end) {
    for (std::size_t x = frontier_begin; x < frontier_end; ++x)
      if (!unary(x)) return false;
    for (std::size_t x = frontier_begin; x < frontier_end; ++x) {
      const std::size_t ax = entries_[x].table.arity;
      if (ax == 0) continue;
      for (std::size_t y = 0; y < frontier_end; ++y) {
        const std::size_t ay = entries_[y].table.arity;
        if (ay == 0) continue;
        const bool old = y < frontier_begin;
        if (ax + ay <= max_arity_) {
          if (!push({Expr::Kind::Product, x, y})) return false;
          if (old && !push({Expr::Kind::Product, y, x})) return false;
        }
        if (ax == ay && (old || y > x) && !push({Expr::Kind::Union, x, y})) return false;
      }
    }
    return true;
  }

  std::vector<Job> jobs;

 private:
  bool unary(std::size_t x) {
    const Table& t = entries_[x].table;
    const std::size_t n = t.arity;
    if (n == 0) return true;
    for (std::size_t c = 1; c <= n; ++c) {
      std::set<Value> values;
      for (const auto& r : t.rows) values.insert(r[c - 1]);
      for (const auto& v : values) {
        Job j{Expr::Kind::SelectConst, x};
        j.column = c;
        j.constant = v;
        if (!push(std::move(j))) return false;
      }
    }
    for (std::size_t c1 = 1; c1 <= n; ++c1)
      for (std::size_t c2 = c1 + 1; c2 <= n; ++c2) {
        Job s{Expr::Kind::SelectCols, x};
        s.column = c1;
        s.column2 = c2;
        if (!push(s)) return false;
        s.kind = Expr::Kind::Swap;
        if (!push(std::move(s))) return false;
      }
    for (auto& p : proper_subsequences(n)) {
      Job j{Expr::Kind::Project, x};
      j.positions = std::move(p);
      if (!push(std::move(j))) return false;
    }
    return true;
  }

  bool push(Job j) {
    if (jobs.size() >= budget_) return false;
    jobs.push_back(std::move(j));
    return true;
  }

  const std::vector<ClosureEntry>& entries_;
  std::size_t max_arity_;
  std::size_t budget_;
};

void balanced_tree(std::vector<ExprPtr>& items, ExprPtr (*combine)(ExprPtr, ExprPtr)) {
  while (items.size() > 1) {
    std::vector<ExprPtr> next;
    for (std::size_t i = 0; i + 1 < items.size(); i += 2) next.push_back(combine(items[i], items[i + 1]));
    if (items.size() % 2) next.push_back(items.back());
    items = std::move(next);
  }
}

}  // namespace

ExprPtr generator_expr(std::size_t index) {
  Expr e;
  e.kind = Expr::Kind::Generator;
  e.generator = index;
  return make(std::move(e));
}

ExprPtr select_const(ExprPtr a, std::size_t column, Value constant) {
  Expr e;
  e.kind = Expr::Kind::SelectConst;
  e.column = column;
  e.constant = std::move(constant);
  e.left = std::move(a);
  return make(std::move(e));
}

ExprPtr select_cols(ExprPtr a, std::size_t column, std::size_t column2) {
  Expr e;
  e.kind = Expr::Kind::SelectCols;
  e.column = column;
  e.column2 = column2;
  e.left = std::move(a);
  return make(std::move(e));
}

ExprPtr project_expr(ExprPtr a, std::vector<std::size_t> positions) {
  Expr e;
  e.kind = Expr::Kind::Project;
  e.positions = std::move(positions);
  e.left = std::move(a);
  return make(std::move(e));
}

ExprPtr swap_expr(ExprPtr a, std::size_t column, std::size_t column2) {
  Expr e;
  e.kind = Expr::Kind::Swap;
  e.column = column;
  e.column2 = column2;
  e.left = std::move(a);
  return make(std::move(e));
}

ExprPtr product_expr(ExprPtr a, ExprPtr b) {
  Expr e;
  e.kind = Expr::Kind::Product;
  e.left = std::move(a);
  e.right = std::move(b);
  return make(std::move(e));
}

ExprPtr union_expr(ExprPtr a, ExprPtr b) {
  Expr e;
  e.kind = Expr::Kind::Union;
  e.left = std::move(a);
  e.right = std::move(b);
  return make(std::move(e));
}

Table evaluate(const Expr& e, std::span<const Table> generators) {
  switch (e.kind) {
    case Expr::Kind::Generator:
      if (e.generator >= generators.size()) throw IndexError("no generator " + std::to_string(e.generator));
      return generators[e.generator];
    case Expr::Kind::SelectConst: return select_const_table(evaluate(*e.left, generators), e.column, e.constant);
    case Expr::Kind::SelectCols: return select_cols_table(evaluate(*e.left, generators), e.column, e.column2);
    case Expr::Kind::Project: return project(evaluate(*e.left, generators), e.positions);
    case Expr::Kind::Swap: return swap_table(evaluate(*e.left, generators), e.column, e.column2);
    case Expr::Kind::Product: return product_table(evaluate(*e.left, generators), evaluate(*e.right, generators));
    case Expr::Kind::Union: return union_table(evaluate(*e.left, generators), evaluate(*e.right, generators));
  }
  return {};
}

std::string render(const Expr& e) {
  auto quote = [](const Value& v) { return v.is_string() ? "\"" + v.as_string() + "\"" : v.render(); };
  switch (e.kind) {
    case Expr::Kind::Generator: return "G" + std::to_string(e.generator + 1);
    case Expr::Kind::SelectConst:
      return "select[" + std::to_string(e.column) + "=" + quote(e.constant) + "](" + render(*e.left) + ")";
    case Expr::Kind::SelectCols:
      return "select[" + std::to_string(e.column) + "=" + "#" + std::to_string(e.column2) + "](" + render(*e.left) +
             ")";
    case Expr::Kind::Project: {
      std::string cols;
      for (std::size_t p : e.positions) cols += (cols.empty() ? "" : ",") + std::to_string(p);
      return "project[" + cols + "](" + render(*e.left) + ")";
    }
    case Expr::Kind::Swap:
      return "rename[" + std::to_string(e.column) + "<->" + std::to_string(e.column2) + "](" + render(*e.left) + ")";
    case Expr::Kind::Product: return "(" + render(*e.left) + " x " + render(*e.right) + ")";
    case Expr::Kind::Union: return "(" + render(*e.left) + " u " + render(*e.right) + ")";
  }
  return "?";
}

std::size_t depth(const Expr& e) {
  if (e.kind == Expr::Kind::Generator) return 0;
  std::size_t d = depth(*e.left);
  if (e.right) d = std::max(d, depth(*e.right));
  return d + 1;
}

const ClosureEntry* Closure::find(const Table& t) const {
  auto it = index.find(t);
  return it == index.end() ? nullptr : &entries[it->second];
}

Closure enumerate_closure(std::span<const Table> generators, const ClosureBounds& bounds, Execution exec,
                          const Table* goal) {
  Closure c;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (c.index.contains(generators[i])) continue;
    c.index.emplace(generators[i], c.entries.size());
    c.entries.push_back({generators[i], generator_expr(i), 0});
  }
  if (goal && c.index.contains(*goal)) return c;

  std::size_t frontier_begin = 0;
  std::size_t frontier_end = c.entries.size();
  for (std::size_t d = 1; d <= bounds.max_depth && frontier_begin < frontier_end; ++d) {
    const std::size_t budget = bounds.max_relations > c.candidates ? bounds.max_relations - c.candidates : 0;
    JobGenerator gen(c.entries, bounds.max_arity, budget);
    if (!gen.run(frontier_begin, frontier_end)) c.capped = true;
    c.candidates += gen.jobs.size();

    std::vector<Table> results(gen.jobs.size());
    for_each_index(
        gen.jobs.size(), [&](std::size_t k) { results[k] = run_job(gen.jobs[k], c.entries); }, exec);

    for (std::size_t k = 0; k < results.size(); ++k) {
      if (results[k].arity > bounds.max_arity || c.index.contains(results[k])) continue;
      ExprPtr e = job_expr(gen.jobs[k], c.entries);
      c.index.emplace(results[k], c.entries.size());
      c.entries.push_back({std::move(results[k]), std::move(e), d});
      if (goal && c.entries.back().table == *goal) return c;
    }
    if (c.capped) break;
    frontier_begin = frontier_end;
    frontier_end = c.entries.size();
  }
  return c;
}

std::optional<ExprPtr> construct_derivation(const Table& goal, std::span<const Table> generators) {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i] == goal) return generator_expr(i);
  if (goal.arity == 0) return std::nullopt;

  // unit(v) = π_c σ_{c=v}(G_i) = {<v>}
  auto unit = [&](const Value& v) -> std::optional<ExprPtr> {
    for (std::size_t i = 0; i < generators.size(); ++i) {
      const Table& g = generators[i];
      for (std::size_t c = 1; c <= g.arity; ++c)
        for (const auto& r : g.rows)
          if (r[c - 1] == v) {
            if (g.arity == 1 && g.rows.size() == 1) return generator_expr(i);
            ExprPtr e = select_const(generator_expr(i), c, v);
            if (g.arity > 1) e = project_expr(e, {c});
            return e;
          }
    }
    return std::nullopt;
  };

  if (goal.rows.empty()) {
    // σ_{1=v}σ_{1=w}(G) is empty for v ≠ w; widen to the goal arity by products.
    std::optional<ExprPtr> empty1;
    for (std::size_t i = 0; i < generators.size() && !empty1; ++i) {
      const Table& g = generators[i];
      if (g.arity == 0 || g.rows.empty()) continue;
      const Value& w = g.rows.begin()->front();
      for (const auto& other : generators)
        for (const auto& r : other.rows)
          for (const auto& v : r)
            if (!empty1 && v != w) {
              ExprPtr e = select_const(select_const(generator_expr(i), 1, w), 1, v);
              if (g.arity > 1) e = project_expr(e, {1});
              empty1 = e;
            }
    }
    if (!empty1) return std::nullopt;
    std::vector<ExprPtr> parts(goal.arity, *empty1);
    balanced_tree(parts, &product_expr);
    return parts.front();
  }

  std::vector<ExprPtr> rows;
  for (const auto& r : goal.rows) {
    std::vector<ExprPtr> units;
    for (const auto& v : r) {
      auto u = unit(v);
      if (!u) return std::nullopt;
      units.push_back(*u);
    }
    // Products must stay left-to-right, so combine adjacent pairs.
    balanced_tree(units, &product_expr);
    rows.push_back(units.front());
  }
  balanced_tree(rows, &union_expr);
  return rows.front();
}

}  // namespace dbmorph
