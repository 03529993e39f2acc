#include "ldcalc/derivation.hpp"

#include <algorithm>

#include "ldcalc/errors.hpp"

namespace ldc {

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Ask: return "ask";
    case Rule::Filter: return "filter";
    case Rule::ChooseLeft: return "choose-left";
    case Rule::ChooseRight: return "choose-right";
    case Rule::Tensor: return "tensor";
    case Rule::Weakening: return "weakening";
    case Rule::Dereliction: return "dereliction";
    case Rule::Contraction: return "contraction";
    case Rule::SelectName: return "select-name";
    case Rule::SelectLiteral: return "select-literal";
    case Rule::Guard: return "guard";
    case Rule::Context: return "context";
    case Rule::BlankNode: return "blank-node";
    case Rule::InputTriple: return "input-triple";
    case Rule::TriggerGuard: return "trigger-guard";
    case Rule::InTensor: return "tensor";
    case Rule::InChooseLeft: return "choose-left";
    case Rule::InChooseRight: return "choose-right";
    case Rule::InFilter: return "filter";
    case Rule::InSelectName: return "select-name";
    case Rule::InSelectLiteral: return "select-literal";
    case Rule::InWeakening: return "weakening";
    case Rule::InDereliction: return "dereliction";
    case Rule::InContraction: return "contraction";
    case Rule::QueryInput: return "query";
    case Rule::OutputTriple: return "output-triple";
    case Rule::Open: return "open";
    case Rule::BlankNodeContext: return "blank-node-context";
    case Rule::ParContext: return "par-context";
    case Rule::ParallelOutputs: return "parallel-outputs";
    case Rule::Close: return "close";
    case Rule::Alpha: return "alpha";
    case Rule::Congruence: return "congruence";
  }
  return "?";
}

std::size_t Derivation::size() const {
  std::size_t n = 1;
  for (const auto& p : premises_) n += p->size();
  return n;
}

bool Derivation::uses(Rule r) const {
  if (rule_ == r) return true;
  return std::any_of(premises_.begin(), premises_.end(),
                     [r](const DerivationPtr& p) { return p->uses(r); });
}

std::string to_string(const Judgment& j) {
  if (const auto* c = std::get_if<Commit>(&j)) {
    return to_string(*c->source) + "  =>  " + to_string(*c->target);
  }
  if (const auto* q = std::get_if<QueryStep>(&j)) {
    return to_string(*q->query) + "  " + to_string(Label::input(q->input)) + "  " +
           to_string(*q->target);
  }
  const auto& s = std::get<Step>(j);
  return to_string(*s.source) + "  " + to_string(s.label) + "  " + to_string(*s.target);
}

namespace {

void print_tree(const Derivation& d, std::size_t indent, std::string& out) {
  out.append(indent * 2, ' ');
  out += '[';
  out += rule_name(d.rule());
  out += "] ";
  out += to_string(d.conclusion());
  out += '\n';
  for (const auto& p : d.premises()) print_tree(*p, indent + 1, out);
}

}  // namespace

std::string to_string(const Derivation& d) {
  std::string out;
  print_tree(d, 0, out);
  return out;
}

struct DerivationBuilder {
  std::shared_ptr<Derivation> d{new Derivation()};

  explicit DerivationBuilder(Rule r) { d->rule_ = r; }
  DerivationBuilder& premise(DerivationPtr p) {
    d->premises_.push_back(std::move(p));
    return *this;
  }
  DerivationBuilder& triple(const Triple& t) {
    d->triples_.push_back(t);
    return *this;
  }
  DerivationBuilder& query(QueryPtr q) {
    d->queries_.push_back(std::move(q));
    return *this;
  }
  DerivationBuilder& process(ProcessPtr p) {
    d->processes_.push_back(std::move(p));
    return *this;
  }
  DerivationBuilder& name(const Name& n) {
    d->names_.push_back(n);
    return *this;
  }
  DerivationBuilder& select(const Var& v, const Term& w) {
    d->var_ = v;
    d->witness_ = w;
    return *this;
  }
  DerivationBuilder& flag(bool f) {
    d->flag_ = f;
    return *this;
  }
  DerivationPtr done(Judgment j) {
    d->conclusion_ = std::move(j);
    return d;
  }
};

namespace derive {

namespace {

[[noreturn]] void invalid(Rule r, const std::string& why) {
  throw InvalidDerivation(std::string(rule_name(r)) + ": " + why);
}

ProcessPtr par_nil(const ProcessPtr& a, const ProcessPtr& b) {
  if (a->kind() == ProcessKind::Nothing) return b;
  if (b->kind() == ProcessKind::Nothing) return a;
  return Process::par(a, b);
}

bool same(const Process& a, const Process& b) { return to_string(a) == to_string(b); }
bool same(const Query& a, const Query& b) { return to_string(a) == to_string(b); }

Commit query_commit(ProcessPtr ctx, QueryPtr q, ProcessPtr target) {
  ProcessPtr source = par_nil(ctx, Process::query(q));
  return Commit{source, std::move(target), std::move(ctx), std::move(q)};
}

const Commit& query_level(Rule r, const DerivationPtr& d) {
  const auto* c = std::get_if<Commit>(&d->conclusion());
  if (!c || !c->query) invalid(r, "premise is not a query-level commitment");
  return *c;
}

const QueryStep& query_premise(Rule r, const DerivationPtr& d) {
  const auto* q = std::get_if<QueryStep>(&d->conclusion());
  if (!q) invalid(r, "premise is not a query transition");
  return *q;
}

const Step& step_premise(Rule r, const DerivationPtr& d) {
  const auto* s = std::get_if<Step>(&d->conclusion());
  if (!s) invalid(r, "premise is not a process transition");
  return *s;
}

std::vector<Triple> merged(std::vector<Triple> a, const std::vector<Triple>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

bool intersects(const std::vector<Name>& names, const std::set<Name>& set) {
  return std::any_of(names.begin(), names.end(), [&](const Name& n) { return set.count(n); });
}

void check_selected(Rule r, const Var& var, const QueryPtr& body, const Term& witness,
                    const Query& premise) {
  QueryPtr expected;
  try {
    expected = substitute(body, Substitution{{var, witness}});
  } catch (const SortError& e) {
    invalid(r, e.what());
  }
  if (!same(*expected, premise)) invalid(r, "premise does not answer the instantiated body");
}

}  // namespace

DerivationPtr ask(const AliasTable& alias, const Triple& stored, const Pattern& asked) {
  if (!is_ground(asked)) invalid(Rule::Ask, "asked triple is not ground");
  if (!triple_leq(alias, stored, ground_triple(asked))) {
    invalid(Rule::Ask, to_string(stored) + " is not below " + to_string(asked));
  }
  ProcessPtr s = Process::stored(stored);
  return DerivationBuilder(Rule::Ask)
      .triple(stored)
      .triple(ground_triple(asked))
      .done(query_commit(s, Query::ask(asked), s));
}

DerivationPtr filter(const ConstraintPtr& c) {
  bool ok = false;
  try {
    ok = holds(*c);
  } catch (const NonGroundConstraint& e) {
    invalid(Rule::Filter, e.what());
  }
  if (!ok) invalid(Rule::Filter, "constraint does not hold");
  return DerivationBuilder(Rule::Filter)
      .query(Query::filter(c))
      .done(query_commit(Process::nothing(), Query::filter(c), Process::nothing()));
}

DerivationPtr choose_left(const DerivationPtr& d, const QueryPtr& other) {
  const Commit& c = query_level(Rule::ChooseLeft, d);
  return DerivationBuilder(Rule::ChooseLeft)
      .premise(d)
      .query(other)
      .done(query_commit(c.context, Query::choice(c.query, other), c.target));
}

DerivationPtr choose_right(const QueryPtr& other, const DerivationPtr& d) {
  const Commit& c = query_level(Rule::ChooseRight, d);
  return DerivationBuilder(Rule::ChooseRight)
      .premise(d)
      .query(other)
      .done(query_commit(c.context, Query::choice(other, c.query), c.target));
}

DerivationPtr tensor(const DerivationPtr& left, const DerivationPtr& right) {
  const Commit& l = query_level(Rule::Tensor, left);
  const Commit& r = query_level(Rule::Tensor, right);
  return DerivationBuilder(Rule::Tensor)
      .premise(left)
      .premise(right)
      .done(query_commit(par_nil(l.context, r.context), Query::tensor(l.query, r.query),
                         par_nil(l.target, r.target)));
}

DerivationPtr weakening(const QueryPtr& body) {
  return DerivationBuilder(Rule::Weakening)
      .query(body)
      .done(query_commit(Process::nothing(), Query::bang(body), Process::nothing()));
}

DerivationPtr dereliction(const DerivationPtr& d) {
  const Commit& c = query_level(Rule::Dereliction, d);
  return DerivationBuilder(Rule::Dereliction)
      .premise(d)
      .done(query_commit(c.context, Query::bang(c.query), c.target));
}

DerivationPtr contraction(const DerivationPtr& d) {
  const Commit& c = query_level(Rule::Contraction, d);
  const Query& q = *c.query;
  if (q.kind() != QueryKind::Tensor || q.left()->kind() != QueryKind::Bang ||
      !same(*q.left(), *q.right())) {
    invalid(Rule::Contraction, "premise query is not !U (x) !U");
  }
  return DerivationBuilder(Rule::Contraction)
      .premise(d)
      .done(query_commit(c.context, q.left(), c.target));
}

DerivationPtr select(const Var& var, const QueryPtr& body, const Term& witness,
                     const DerivationPtr& d) {
  Rule r = var.sort == Sort::Name ? Rule::SelectName : Rule::SelectLiteral;
  const Commit& c = query_level(r, d);
  check_selected(r, var, body, witness, *c.query);
  return DerivationBuilder(r)
      .premise(d)
      .query(body)
      .select(var, witness)
      .done(query_commit(c.context, Query::select(var, body), c.target));
}

DerivationPtr guard(const DerivationPtr& d, const ProcessPtr& continuation) {
  const Commit& c = query_level(Rule::Guard, d);
  return DerivationBuilder(Rule::Guard)
      .premise(d)
      .process(continuation)
      .done(query_commit(c.context, Query::then(c.query, continuation),
                         par_nil(c.target, continuation)));
}

DerivationPtr context(const DerivationPtr& d, const ProcessPtr& idle) {
  const auto* c = std::get_if<Commit>(&d->conclusion());
  if (!c) invalid(Rule::Context, "premise is not a commitment");
  return DerivationBuilder(Rule::Context)
      .premise(d)
      .process(idle)
      .done(Commit{Process::par(c->source, idle), Process::par(c->target, idle), nullptr, nullptr});
}

DerivationPtr blank_node(const AliasTable& alias, const DerivationPtr& d, const Name& a,
                         const ProcessPtr& p, const ProcessPtr& p_after) {
  const auto* c = std::get_if<Commit>(&d->conclusion());
  if (!c) invalid(Rule::BlankNode, "premise is not a commitment");
  if (alias.names().count(a)) invalid(Rule::BlankNode, to_string(a) + " occurs in the alias table");
  DerivationBuilder b(Rule::BlankNode);
  b.premise(d).name(a);
  if (!p) {
    return b.done(Commit{Process::scope(a, c->source), Process::scope(a, c->target), nullptr,
                         nullptr});
  }
  if (!p_after) invalid(Rule::BlankNode, "missing residual of the unscoped side");
  if (free_names(*p).count(a) || free_names(*p_after).count(a)) {
    invalid(Rule::BlankNode, to_string(a) + " is free outside its scope");
  }
  const Process& src = *c->source;
  const Process& tgt = *c->target;
  if (src.kind() != ProcessKind::Par || !same(*src.left(), *p) ||
      tgt.kind() != ProcessKind::Par || !same(*tgt.left(), *p_after)) {
    invalid(Rule::BlankNode, "premise is not of the form P | Q => P' | Q'");
  }
  b.process(p).process(p_after);
  return b.done(Commit{Process::par(p, Process::scope(a, src.right())),
                       Process::par(p_after, Process::scope(a, tgt.right())), nullptr, nullptr});
}

// ---------------------------------------------------------------------------

DerivationPtr input_triple(const AliasTable& alias, const Triple& label, const Pattern& asked) {
  if (!is_ground(asked)) invalid(Rule::InputTriple, "asked triple is not ground");
  if (!triple_leq(alias, label, ground_triple(asked))) {
    invalid(Rule::InputTriple, to_string(label) + " is not below " + to_string(asked));
  }
  return DerivationBuilder(Rule::InputTriple)
      .triple(label)
      .triple(ground_triple(asked))
      .done(QueryStep{Query::ask(asked), {label}, Process::nothing()});
}

DerivationPtr trigger_guard(const DerivationPtr& d, const ProcessPtr& continuation) {
  const QueryStep& q = query_premise(Rule::TriggerGuard, d);
  return DerivationBuilder(Rule::TriggerGuard)
      .premise(d)
      .process(continuation)
      .done(QueryStep{Query::then(q.query, continuation), q.input,
                      par_nil(q.target, continuation)});
}

DerivationPtr in_tensor(const DerivationPtr& left, const DerivationPtr& right) {
  const QueryStep& l = query_premise(Rule::InTensor, left);
  const QueryStep& r = query_premise(Rule::InTensor, right);
  return DerivationBuilder(Rule::InTensor)
      .premise(left)
      .premise(right)
      .done(QueryStep{Query::tensor(l.query, r.query), merged(l.input, r.input),
                      par_nil(l.target, r.target)});
}

DerivationPtr in_choose_left(const DerivationPtr& d, const QueryPtr& other) {
  const QueryStep& q = query_premise(Rule::InChooseLeft, d);
  return DerivationBuilder(Rule::InChooseLeft)
      .premise(d)
      .query(other)
      .done(QueryStep{Query::choice(q.query, other), q.input, q.target});
}

DerivationPtr in_choose_right(const QueryPtr& other, const DerivationPtr& d) {
  const QueryStep& q = query_premise(Rule::InChooseRight, d);
  return DerivationBuilder(Rule::InChooseRight)
      .premise(d)
      .query(other)
      .done(QueryStep{Query::choice(other, q.query), q.input, q.target});
}

DerivationPtr in_filter(const ConstraintPtr& c) {
  bool ok = false;
  try {
    ok = holds(*c);
  } catch (const NonGroundConstraint& e) {
    invalid(Rule::InFilter, e.what());
  }
  if (!ok) invalid(Rule::InFilter, "constraint does not hold");
  return DerivationBuilder(Rule::InFilter)
      .query(Query::filter(c))
      .done(QueryStep{Query::filter(c), {}, Process::nothing()});
}

DerivationPtr in_select(const Var& var, const QueryPtr& body, const Term& witness,
                        const DerivationPtr& d) {
  Rule r = var.sort == Sort::Name ? Rule::InSelectName : Rule::InSelectLiteral;
  const QueryStep& q = query_premise(r, d);
  check_selected(r, var, body, witness, *q.query);
  return DerivationBuilder(r)
      .premise(d)
      .query(body)
      .select(var, witness)
      .done(QueryStep{Query::select(var, body), q.input, q.target});
}

DerivationPtr in_weakening(const QueryPtr& body) {
  return DerivationBuilder(Rule::InWeakening)
      .query(body)
      .done(QueryStep{Query::bang(body), {}, Process::nothing()});
}

DerivationPtr in_dereliction(const DerivationPtr& d) {
  const QueryStep& q = query_premise(Rule::InDereliction, d);
  return DerivationBuilder(Rule::InDereliction)
      .premise(d)
      .done(QueryStep{Query::bang(q.query), q.input, q.target});
}

DerivationPtr in_contraction(const DerivationPtr& d) {
  const QueryStep& q = query_premise(Rule::InContraction, d);
  const Query& t = *q.query;
  if (t.kind() != QueryKind::Tensor || t.left()->kind() != QueryKind::Bang ||
      !same(*t.left(), *t.right())) {
    invalid(Rule::InContraction, "premise query is not !U (x) !U");
  }
  return DerivationBuilder(Rule::InContraction)
      .premise(d)
      .done(QueryStep{t.left(), q.input, q.target});
}

// ---------------------------------------------------------------------------

DerivationPtr query_input(const DerivationPtr& d) {
  const QueryStep& q = query_premise(Rule::QueryInput, d);
  return DerivationBuilder(Rule::QueryInput)
      .premise(d)
      .done(Step{Process::query(q.query), Label::input(q.input), q.target});
}

DerivationPtr output_triple(const AliasTable& alias, const Triple& stored, const Triple& label) {
  if (!triple_leq(alias, stored, label)) {
    invalid(Rule::OutputTriple, to_string(stored) + " is not below " + to_string(label));
  }
  ProcessPtr s = Process::stored(stored);
  return DerivationBuilder(Rule::OutputTriple)
      .triple(stored)
      .triple(label)
      .done(Step{s, Label::output({}, {label}), s});
}

DerivationPtr open(const AliasTable& alias, const DerivationPtr& d, const Name& a) {
  const Step& s = step_premise(Rule::Open, d);
  if (!s.label.is_output()) invalid(Rule::Open, "label is not an output");
  if (alias.names().count(a)) invalid(Rule::Open, to_string(a) + " occurs in the alias table");
  if (std::find(s.label.extruded.begin(), s.label.extruded.end(), a) != s.label.extruded.end()) {
    invalid(Rule::Open, to_string(a) + " is already extruded");
  }
  if (!free_names(s.label).count(a)) invalid(Rule::Open, to_string(a) + " does not occur on the label");
  std::vector<Name> extruded = s.label.extruded;
  extruded.push_back(a);
  return DerivationBuilder(Rule::Open)
      .premise(d)
      .name(a)
      .done(Step{Process::scope(a, s.source), Label::output(extruded, s.label.triples), s.target});
}

DerivationPtr blank_node_context(const DerivationPtr& d, const Name& a) {
  const Step& s = step_premise(Rule::BlankNodeContext, d);
  if (free_names(s.label).count(a) ||
      std::find(s.label.extruded.begin(), s.label.extruded.end(), a) != s.label.extruded.end()) {
    invalid(Rule::BlankNodeContext, to_string(a) + " occurs on the label");
  }
  return DerivationBuilder(Rule::BlankNodeContext)
      .premise(d)
      .name(a)
      .done(Step{Process::scope(a, s.source), s.label, Process::scope(a, s.target)});
}

DerivationPtr par_context(const DerivationPtr& d, const ProcessPtr& idle, bool idle_left) {
  const Step& s = step_premise(Rule::ParContext, d);
  if (intersects(s.label.extruded, free_names(*idle))) {
    invalid(Rule::ParContext, "an extruded name is free in the idle process");
  }
  DerivationBuilder b(Rule::ParContext);
  b.premise(d).process(idle).flag(idle_left);
  if (idle_left) return b.done(Step{Process::par(idle, s.source), s.label, Process::par(idle, s.target)});
  return b.done(Step{Process::par(s.source, idle), s.label, Process::par(s.target, idle)});
}

DerivationPtr parallel_outputs(const DerivationPtr& left, const DerivationPtr& right) {
  const Step& l = step_premise(Rule::ParallelOutputs, left);
  const Step& r = step_premise(Rule::ParallelOutputs, right);
  if (!l.label.is_output() || !r.label.is_output()) {
    invalid(Rule::ParallelOutputs, "both premises must be outputs");
  }
  if (intersects(l.label.extruded, free_names(*r.source)) ||
      intersects(r.label.extruded, free_names(*l.source))) {
    invalid(Rule::ParallelOutputs, "an extruded name is free on the other side");
  }
  std::set<Name> left_ex(l.label.extruded.begin(), l.label.extruded.end());
  if (intersects(r.label.extruded, left_ex)) {
    invalid(Rule::ParallelOutputs, "extruded names are not disjoint");
  }
  std::vector<Name> ex = l.label.extruded;
  ex.insert(ex.end(), r.label.extruded.begin(), r.label.extruded.end());
  return DerivationBuilder(Rule::ParallelOutputs)
      .premise(left)
      .premise(right)
      .done(Step{Process::par(l.source, r.source),
                 Label::output(ex, merged(l.label.triples, r.label.triples)),
                 Process::par(l.target, r.target)});
}

DerivationPtr close(const DerivationPtr& input, const DerivationPtr& output, bool output_left) {
  const Step& in = step_premise(Rule::Close, input);
  const Step& out = step_premise(Rule::Close, output);
  if (!in.label.is_input()) invalid(Rule::Close, "first premise must be an input");
  if (!out.label.is_output()) invalid(Rule::Close, "second premise must be an output");
  std::vector<Triple> rest = in.label.triples;
  for (const auto& f : out.label.triples) {
    auto it = std::find(rest.begin(), rest.end(), f);
    if (it == rest.end()) invalid(Rule::Close, "output " + to_string(f) + " is not an input");
    rest.erase(it);
  }
  Label residual = Label::input(rest);
  std::set<Name> guarded = free_names(*in.source);
  auto fe = free_names(residual);
  guarded.insert(fe.begin(), fe.end());
  if (intersects(out.label.extruded, guarded)) {
    invalid(Rule::Close, "an extruded name escapes its scope");
  }
  ProcessPtr target = output_left ? Process::par(out.target, in.target)
                                  : Process::par(in.target, out.target);
  for (auto it = out.label.extruded.rbegin(); it != out.label.extruded.rend(); ++it) {
    target = Process::scope(*it, target);
  }
  ProcessPtr source = output_left ? Process::par(out.source, in.source)
                                  : Process::par(in.source, out.source);
  return DerivationBuilder(Rule::Close)
      .premise(input)
      .premise(output)
      .flag(output_left)
      .done(Step{source, residual, target});
}

DerivationPtr alpha(const DerivationPtr& d, const Name& from, const Name& to) {
  const Step& s = step_premise(Rule::Alpha, d);
  const auto& ex = s.label.extruded;
  if (std::find(ex.begin(), ex.end(), from) == ex.end()) {
    invalid(Rule::Alpha, to_string(from) + " is not extruded");
  }
  if (from != to) {
    if (free_names(*s.source).count(to) || free_names(*s.target).count(to) ||
        std::find(ex.begin(), ex.end(), to) != ex.end()) {
      invalid(Rule::Alpha, to_string(to) + " is not fresh");
    }
  }
  auto rn = [&](const Name& n) { return n == from ? to : n; };
  std::vector<Name> names;
  for (const auto& n : ex) names.push_back(rn(n));
  std::vector<Triple> triples;
  for (const auto& t : s.label.triples) {
    triples.push_back(Triple{rn(t.subject), rn(t.predicate),
                             t.object.is_name() ? Term(rn(t.object.name())) : t.object});
  }
  return DerivationBuilder(Rule::Alpha)
      .premise(d)
      .name(from)
      .name(to)
      .done(Step{s.source, Label::output(names, triples), rename_name(s.target, from, to)});
}

DerivationPtr congruence(const DerivationPtr& d, const ProcessPtr& source,
                         const ProcessPtr& target) {
  DerivationBuilder b(Rule::Congruence);
  b.premise(d).process(source).process(target);
  if (const auto* c = std::get_if<Commit>(&d->conclusion())) {
    if (!congruent(c->source, source) || !congruent(c->target, target)) {
      invalid(Rule::Congruence, "processes are not structurally congruent");
    }
    return b.done(Commit{source, target, nullptr, nullptr});
  }
  if (const auto* q = std::get_if<QueryStep>(&d->conclusion())) {
    if (!congruent(q->target, target)) {
      invalid(Rule::Congruence, "targets are not structurally congruent");
    }
    return b.done(QueryStep{q->query, q->input, target});
  }
  const Step& s = d->step();
  if (!congruent(s.source, source) || !congruent(s.target, target)) {
    invalid(Rule::Congruence, "processes are not structurally congruent");
  }
  return b.done(Step{source, s.label, target});
}

}  // namespace derive

namespace {

DerivationPtr rebuild(const Derivation& d, const AliasTable& alias);

DerivationPtr rebuild_node(const Derivation& d, const AliasTable& alias) {
  std::vector<DerivationPtr> p;
  for (const auto& premise : d.premises()) p.push_back(rebuild(*premise, alias));
  auto need = [&](std::size_t n) {
    if (p.size() != n) throw InvalidDerivation(std::string(rule_name(d.rule())) + ": wrong arity");
  };
  const auto& tr = d.triples();
  const auto& qs = d.queries();
  const auto& ps = d.processes();
  const auto& ns = d.names();
  switch (d.rule()) {
    case Rule::Ask: need(0); return derive::ask(alias, tr.at(0), pattern_of(tr.at(1)));
    case Rule::Filter: need(0); return derive::filter(qs.at(0)->constraint());
    case Rule::ChooseLeft: need(1); return derive::choose_left(p[0], qs.at(0));
    case Rule::ChooseRight: need(1); return derive::choose_right(qs.at(0), p[0]);
    case Rule::Tensor: need(2); return derive::tensor(p[0], p[1]);
    case Rule::Weakening: need(0); return derive::weakening(qs.at(0));
    case Rule::Dereliction: need(1); return derive::dereliction(p[0]);
    case Rule::Contraction: need(1); return derive::contraction(p[0]);
    case Rule::SelectName:
    case Rule::SelectLiteral:
      need(1);
      return derive::select(*d.var(), qs.at(0), *d.witness(), p[0]);
    case Rule::Guard: need(1); return derive::guard(p[0], ps.at(0));
    case Rule::Context: need(1); return derive::context(p[0], ps.at(0));
    case Rule::BlankNode:
      need(1);
      if (ps.empty()) return derive::blank_node(alias, p[0], ns.at(0));
      return derive::blank_node(alias, p[0], ns.at(0), ps.at(0), ps.at(1));
    case Rule::InputTriple: need(0); return derive::input_triple(alias, tr.at(0), pattern_of(tr.at(1)));
    case Rule::TriggerGuard: need(1); return derive::trigger_guard(p[0], ps.at(0));
    case Rule::InTensor: need(2); return derive::in_tensor(p[0], p[1]);
    case Rule::InChooseLeft: need(1); return derive::in_choose_left(p[0], qs.at(0));
    case Rule::InChooseRight: need(1); return derive::in_choose_right(qs.at(0), p[0]);
    case Rule::InFilter: need(0); return derive::in_filter(qs.at(0)->constraint());
    case Rule::InSelectName:
    case Rule::InSelectLiteral:
      need(1);
      return derive::in_select(*d.var(), qs.at(0), *d.witness(), p[0]);
    case Rule::InWeakening: need(0); return derive::in_weakening(qs.at(0));
    case Rule::InDereliction: need(1); return derive::in_dereliction(p[0]);
    case Rule::InContraction: need(1); return derive::in_contraction(p[0]);
    case Rule::QueryInput: need(1); return derive::query_input(p[0]);
    case Rule::OutputTriple: need(0); return derive::output_triple(alias, tr.at(0), tr.at(1));
    case Rule::Open: need(1); return derive::open(alias, p[0], ns.at(0));
    case Rule::BlankNodeContext: need(1); return derive::blank_node_context(p[0], ns.at(0));
    case Rule::ParContext: need(1); return derive::par_context(p[0], ps.at(0), d.flag());
    case Rule::ParallelOutputs: need(2); return derive::parallel_outputs(p[0], p[1]);
    case Rule::Close: need(2); return derive::close(p[0], p[1], d.flag());
    case Rule::Alpha: need(1); return derive::alpha(p[0], ns.at(0), ns.at(1));
    case Rule::Congruence: need(1); return derive::congruence(p[0], ps.at(0), ps.at(1));
  }
  throw InvalidDerivation("unknown rule");
}

DerivationPtr rebuild(const Derivation& d, const AliasTable& alias) {
  DerivationPtr again = rebuild_node(d, alias);
  if (to_string(again->conclusion()) != to_string(d.conclusion())) {
    throw InvalidDerivation(std::string(rule_name(d.rule())) + ": stored conclusion differs");
  }
  return again;
}

}  // namespace

void replay(const Derivation& d, const AliasTable& alias) { rebuild(d, alias); }

}  // namespace ldc
