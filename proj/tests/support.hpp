#pragma once

// Shared test helpers: an independent positional-semantics evaluator for
// formulas, seeded random generators, and a builder for hand-assembled
// product games that bypasses the automaton pipeline.

#include <algorithm>
#include <random>
#include <stdexcept>
#include <utility>
#include <string>
#include <vector>

#include "prefgame/ltlf.hpp"
#include "prefgame/preorder.hpp"
#include "prefgame/product.hpp"
#include "prefgame/solve.hpp"

namespace testsup {

using prefgame::Preorder;
using prefgame::ltlf::Formula;
using prefgame::ltlf::Kind;
using prefgame::ltlf::Letter;
using prefgame::ltlf::Word;

// ---------------------------------------------------------------------------
// Positional evaluation of a formula on a finite word.  Written directly from
// the recursive truth definition, so it shares no code with the progression /
// DFA pipeline it is used to check.  At i == |w| the empty-suffix rules apply:
// atoms and Next are false, Until/Eventually defer to the right operand /
// body, Always holds.
inline bool sem_eval(const Formula& f, const Word& w,
                     const std::vector<std::string>& ap, size_t i) {
  const size_t n = w.size();
  switch (f->kind) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Atom: {
      if (i >= n) return false;
      for (size_t b = 0; b < ap.size(); ++b)
        if (ap[b] == f->atom) return (w[i] >> b) & 1u;
      return false;
    }
    case Kind::Not:
      return !sem_eval(f->kids[0], w, ap, i);
    case Kind::And:
      for (auto& k : f->kids)
        if (!sem_eval(k, w, ap, i)) return false;
      return true;
    case Kind::Or:
      for (auto& k : f->kids)
        if (sem_eval(k, w, ap, i)) return true;
      return false;
    case Kind::Next:
      return i < n && sem_eval(f->kids[0], w, ap, i + 1);
    case Kind::Until:
      if (i >= n) return sem_eval(f->kids[1], w, ap, i);
      return sem_eval(f->kids[1], w, ap, i) ||
             (sem_eval(f->kids[0], w, ap, i) && sem_eval(f, w, ap, i + 1));
    case Kind::Eventually:
      if (i >= n) return sem_eval(f->kids[0], w, ap, i);
      return sem_eval(f->kids[0], w, ap, i) || sem_eval(f, w, ap, i + 1);
    case Kind::Always:
      if (i >= n) return true;
      return sem_eval(f->kids[0], w, ap, i) && sem_eval(f, w, ap, i + 1);
  }
  return false;
}

inline bool sem_eval(const Formula& f, const Word& w,
                     const std::vector<std::string>& ap) {
  return sem_eval(f, w, ap, 0);
}

// ---------------------------------------------------------------------------
// Random structure generators.  All take the engine by reference so callers
// control seeding and reproducibility.

inline Formula random_formula(std::mt19937& rng,
                              const std::vector<std::string>& ap, int depth) {
  namespace lt = prefgame::ltlf;
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
  switch (pick(rng)) {
    case 0:
    case 1: {
      std::uniform_int_distribution<size_t> a(0, ap.size() - 1);
      return lt::f_atom(ap[a(rng)]);
    }
    case 2:
      return rng() & 1 ? lt::f_true() : lt::f_false();
    case 3:
      return lt::f_not(random_formula(rng, ap, depth - 1));
    case 4:
      return lt::f_and({random_formula(rng, ap, depth - 1),
                        random_formula(rng, ap, depth - 1)});
    case 5:
      return lt::f_or({random_formula(rng, ap, depth - 1),
                       random_formula(rng, ap, depth - 1)});
    case 6:
      return lt::f_next(random_formula(rng, ap, depth - 1));
    case 7:
      return lt::f_until(random_formula(rng, ap, depth - 1),
                         random_formula(rng, ap, depth - 1));
    case 8:
      return lt::f_eventually(random_formula(rng, ap, depth - 1));
    default:
      return lt::f_always(random_formula(rng, ap, depth - 1));
  }
}

inline Word random_word(std::mt19937& rng, int num_ap, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<Letter> letter(0, (1u << num_ap) - 1);
  Word w(len(rng));
  for (auto& l : w) l = letter(rng);
  return w;
}

/// Random preorder: identity plus `extra` random arcs, transitively closed.
inline Preorder random_preorder(std::mt19937& rng, int n, int extra) {
  Preorder r(n);
  r.make_reflexive();
  std::uniform_int_distribution<int> el(0, n - 1);
  for (int k = 0; k < extra; ++k) r.add(el(rng), el(rng));
  r.transitive_closure();
  return r;
}

// ---------------------------------------------------------------------------
// Synthetic product games.  The game component is generated on the fly (one
// action per edge, owned by the source state's owner) and the automaton
// component is just an index into the given preorders; finalize_product runs
// the same validation and rank computation as the real pipeline.

inline prefgame::prod::ProductGame make_synthetic(
    const std::vector<int>& owners, const std::vector<std::vector<int>>& edges,
    const std::vector<int>& vq, Preorder e1, Preorder e2) {
  namespace pg = prefgame;
  const int n = static_cast<int>(owners.size());
  pg::prod::ProductGame h;
  h.g.ap = {};
  for (int v = 0; v < n; ++v)
    h.g.states.push_back({"s" + std::to_string(v), owners[v], 0});
  h.g.trans.resize(n);
  for (int v = 0; v < n; ++v)
    for (int w : edges[v]) {
      int a = static_cast<int>(h.g.actions.size());
      h.g.actions.push_back({"a" + std::to_string(a), owners[v], 1});
      h.g.trans[v].push_back({a, w});
    }
  h.g.init = 0;
  h.semi = nullptr;
  h.e1 = std::move(e1);
  h.e2 = std::move(e2);
  h.vs.resize(n);
  h.vq = vq;
  for (int v = 0; v < n; ++v) {
    h.vs[v] = v;
    h.index[{v, vq[v]}] = v;
  }
  h.trans = h.g.trans;
  h.init = 0;
  pg::prod::finalize_product(h);
  return h;
}

enum class Cls { Aligned, Opposite, Partial };

/// Random sink-terminating product: a DAG on <= max_v vertices where every
/// vertex is reachable from 0, with random owners and automaton states, and
/// preorders chosen per the requested alignment class.  Retries until the
/// solver's classification (which only sees the automaton states actually
/// present) matches the request.
inline prefgame::prod::ProductGame random_product(std::mt19937& rng, Cls cls,
                                                  int max_v = 12,
                                                  int max_q = 6) {
  using prefgame::solve::Alignment;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::uniform_int_distribution<int> nv_d(4, max_v), nq_d(2, max_q);
    int nv = nv_d(rng), nq = nq_d(rng);
    std::vector<int> owners(nv), vq(nv);
    std::vector<std::vector<int>> edges(nv);
    for (int v = 0; v < nv; ++v) {
      owners[v] = 1 + static_cast<int>(rng() & 1);
      vq[v] = static_cast<int>(rng() % nq);
    }
    for (int v = 1; v < nv; ++v)
      edges[static_cast<int>(rng() % v)].push_back(v);  // keeps 0 the root
    for (int v = 0; v < nv - 1; ++v)
      while (!edges[v].empty() && edges[v].size() < 3 && (rng() & 1)) {
        std::uniform_int_distribution<int> d(v + 1, nv - 1);
        edges[v].push_back(d(rng));
      }
    Preorder e1 = random_preorder(rng, nq, nq + static_cast<int>(rng() % nq));
    Preorder e2;
    switch (cls) {
      case Cls::Aligned:
        e2 = e1;
        break;
      case Cls::Opposite:
        e2 = e1.inverse();
        break;
      case Cls::Partial:
        e2 = random_preorder(rng, nq, nq + static_cast<int>(rng() % nq));
        break;
    }
    auto h = make_synthetic(owners, edges, vq, e1, e2);
    Alignment got = prefgame::solve::classify_alignment(h);
    Alignment want = cls == Cls::Aligned     ? Alignment::FullyAligned
                     : cls == Cls::Opposite ? Alignment::CompletelyOpposite
                                            : Alignment::PartiallyAligned;
    if (got == want) return h;
  }
  throw std::runtime_error("random_product could not hit the requested class");
}

inline std::vector<int> sorted_copy(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace testsup
