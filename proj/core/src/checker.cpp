#include "gsos/checker.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

#include "gsos/error.hpp"
#include "gsos/syntax.hpp"

namespace gsos {

std::string_view modeName(CampaignMode m) { return m == CampaignMode::Open ? "open" : "closed"; }

CampaignMode parseMode(std::string_view s) {
  if (s == "open") return CampaignMode::Open;
  if (s == "closed") return CampaignMode::Closed;
  throw UnknownName("unknown mode: " + std::string(s));
}

CampaignConfig defaultConfig() {
  CampaignConfig cfg;
  if (const char* env = std::getenv("GSOS_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 0);
    if (end != env && *end == '\0') cfg.seed = v;
  }
  return cfg;
}

namespace {

bool framed(const LangDef& lang) { return lang.inputKind == StateKind::Frames || lang.inputKind == StateKind::Sp; }
bool integral(const LangDef& lang) { return lang.name == "while-int"; }
Value lowValue(const LangDef& lang, const CampaignConfig& cfg) { return integral(lang) ? -cfg.maxValue : 0; }

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (r > (UINT64_MAX / std::max<std::uint64_t>(b, 1))) return UINT64_MAX;
    r *= b;
  }
  return r;
}

// Stores over `cells` cells with values in [lo, hi], cell 0 varying fastest.
// Sampled down to `cap` when the product is larger.
std::vector<Store> storesOver(Cell cells, Value lo, Value hi, std::size_t cap, std::uint64_t seed) {
  std::uint64_t base = static_cast<std::uint64_t>(hi - lo + 1);
  std::uint64_t total = ipow(base, cells);
  std::vector<Store> out;
  auto decode = [&](std::uint64_t code) {
    Store s;
    for (Cell c = 0; c < cells; ++c) {
      s.set(c, lo + static_cast<Value>(code % base));
      code /= base;
    }
    return s;
  };
  if (total <= cap) {
    for (std::uint64_t code = 0; code < total; ++code) out.push_back(decode(code));
    return out;
  }
  std::set<Store> seen;
  auto add = [&](Store s) {
    if (out.size() < cap && seen.insert(s).second) out.push_back(std::move(s));
  };
  add(Store{});
  for (Cell c = 0; c < cells; ++c) add(Store{}.with(c, 1));
  Rng rng(hashCombine(seed, 0x57083));
  std::size_t attempts = 0;
  while (out.size() < cap && attempts++ < cap * 20) add(decode(rng.below(total)));
  return out;
}

std::vector<FrameStack> stacksOfLength(std::size_t n, Cell frameLen, Value maxValue, std::size_t cap, std::uint64_t seed) {
  std::vector<FrameStack> out;
  for (const auto& s : storesOver(frameLen * n, 0, maxValue, cap, hashCombine(seed, n))) {
    FrameStack m;
    std::vector<Value> dense = s.take(frameLen * n);
    for (std::size_t i = 0; i < n; ++i)
      m.frames.emplace_back(dense.begin() + static_cast<std::ptrdiff_t>(i * frameLen),
                            dense.begin() + static_cast<std::ptrdiff_t>((i + 1) * frameLen));
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

GenBounds layerBounds(const LangDef& lang, const CampaignConfig& cfg) {
  GenBounds b;
  b.cells = framed(lang) ? cfg.frameLen : cfg.storeCells;
  b.maxValue = cfg.maxValue;
  b.exprDepth = cfg.maxExprDepth;
  b.negativeLiterals = integral(lang);
  return b;
}

GenBounds termBounds(const LangDef& lang, const CampaignConfig& cfg) {
  GenBounds b = layerBounds(lang, cfg);
  b.exprDepth = cfg.termExprDepth;
  return b;
}

std::vector<MachineState> inputWindow(const LangDef& lang, const CampaignConfig& cfg, std::size_t programLen) {
  std::vector<MachineState> out;
  std::size_t cap = std::max<std::size_t>(cfg.samples, 1);
  switch (lang.inputKind) {
    case StateKind::Store:
      for (auto& s : storesOver(cfg.storeCells, lowValue(lang, cfg), cfg.maxValue, cap, cfg.seed)) out.emplace_back(std::move(s));
      break;
    case StateKind::Pc: {
      Value hi = static_cast<Value>(programLen) + cfg.pcAbove;
      std::size_t per = std::max<std::size_t>(1, cap / static_cast<std::size_t>(hi - cfg.pcBelow + 1));
      auto stores = storesOver(cfg.storeCells, 0, cfg.maxValue, per, cfg.seed);
      for (Value pc = cfg.pcBelow; pc <= hi; ++pc)
        for (const auto& s : stores) out.emplace_back(PcState{s, pc});
      break;
    }
    case StateKind::Sp: {
      std::size_t per = std::max<std::size_t>(1, cap / static_cast<std::size_t>(cfg.spMax - cfg.spMin + 1));
      Cell cells = cfg.frameLen * static_cast<Cell>(cfg.spMax + 1);
      auto stores = storesOver(cells, 0, cfg.maxValue, per, cfg.seed);
      for (Value sp = cfg.spMin; sp <= cfg.spMax; ++sp)
        for (const auto& s : stores) out.emplace_back(SpState{s, sp});
      break;
    }
    case StateKind::Frames: {
      std::size_t per = std::max<std::size_t>(1, cap / static_cast<std::size_t>(cfg.spMax + 1));
      for (Value n = 0; n <= cfg.spMax; ++n)
        for (auto& m : stacksOfLength(static_cast<std::size_t>(n), cfg.frameLen, cfg.maxValue, per, cfg.seed))
          out.emplace_back(std::move(m));
      break;
    }
  }
  return out;
}

namespace {

Store randomStore(Rng& rng, Cell cells, Value lo, Value hi) {
  Store s;
  for (Cell c = 0; c < cells; ++c) s.set(c, rng.between(lo, hi));
  return s;
}

MachineState randomState(const LangDef& lang, const CampaignConfig& cfg, Rng& rng) {
  switch (lang.inputKind) {
    case StateKind::Store:
      return randomStore(rng, cfg.storeCells, lowValue(lang, cfg), cfg.maxValue);
    case StateKind::Pc:
      return PcState{randomStore(rng, cfg.storeCells, 0, cfg.maxValue), rng.between(cfg.pcBelow, 2 + cfg.pcAbove)};
    case StateKind::Sp:
      return SpState{randomStore(rng, cfg.frameLen * static_cast<Cell>(cfg.spMax + 1), 0, cfg.maxValue),
                     rng.between(cfg.spMin, cfg.spMax)};
    case StateKind::Frames: {
      FrameStack m;
      auto n = static_cast<std::size_t>(rng.between(0, cfg.spMax));
      for (std::size_t i = 0; i < n; ++i) {
        Frame f(cfg.frameLen);
        for (auto& v : f) v = rng.between(0, cfg.maxValue);
        m.frames.push_back(std::move(f));
      }
      return m;
    }
  }
  return Store{};
}

bool storeInRange(const Store& s, Cell cells, Value lo, Value hi) {
  if (s.extent() > cells) return false;
  for (const auto& [c, v] : s.entries())
    if (v < lo || v > hi) return false;
  return true;
}

bool inDomain(const LangDef& lang, const CampaignConfig& cfg, const MachineState& st) {
  switch (st.kind()) {
    case StateKind::Store:
      return storeInRange(st.store(), cfg.storeCells, lowValue(lang, cfg), cfg.maxValue);
    case StateKind::Pc:
      return storeInRange(st.pcState().store, cfg.storeCells, 0, cfg.maxValue);
    case StateKind::Sp:
      return storeInRange(st.spState().store, cfg.frameLen * static_cast<Cell>(cfg.spMax + 1), 0, cfg.maxValue);
    case StateKind::Frames: {
      const auto& frames = st.frameStack().frames;
      if (frames.size() > static_cast<std::size_t>(cfg.spMax)) return false;
      for (const auto& f : frames) {
        if (f.size() != cfg.frameLen) return false;
        for (Value v : f)
          if (v < 0 || v > cfg.maxValue) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace

std::shared_ptr<const std::map<VarId, BehaviorTable>> sampleTables(const LangDef& lang, const CampaignConfig& cfg,
                                                                   std::size_t j) {
  auto tables = std::make_shared<std::map<VarId, BehaviorTable>>();
  const LangDef* lp = &lang;
  for (VarId v = 0; v < cfg.varPool; ++v) {
    std::uint64_t key = hashCombine(hashCombine(hashCombine(cfg.seed, 0x7AB1E), j), v);
    auto gen = [lp, cfg, key](const MachineState& in) {
      Rng rng(hashCombine(key, in.hash()));
      StepOutcome o;
      bool stop = rng.coin();
      o.state = randomState(*lp, cfg, rng);
      if (lp->hasLabel) o.label = rng.between(0, cfg.maxValue);
      if (!stop) o.continuation = Term::var(static_cast<VarId>(rng.below(cfg.varPool)));
      return o;
    };
    auto domain = [lp, cfg](const MachineState& in) { return inDomain(*lp, cfg, in); };
    tables->emplace(v, BehaviorTable(gen, domain));
  }
  return tables;
}

CaseStream::CaseStream(const CompilerPair& cp, const CampaignConfig& cfg) : cp_(&cp), cfg_(cfg) {
  const LangDef& src = language(cp.source, cfg.frameLen);
  const LangDef& tgt = language(cp.target, cfg.frameLen);
  if (cfg.mode == CampaignMode::Open) {
    if (!cp.openCheckable()) throw IllFormed(cp.name + " is not layer-wise; use closed mode");
    sources_ = enumerateLayers(src.signature, layerBounds(src, cfg));
  } else {
    sources_ = enumerateTerms(src.signature, termBounds(src, cfg), cfg.maxTermSize);
  }
  std::map<std::size_t, std::size_t> byLength;
  for (const auto& s : sources_) {
    std::size_t len = 1;
    if (tgt.inputKind == StateKind::Pc)
      len = programLength(cfg.mode == CampaignMode::Open ? translateLayer(cp, s) : compile(cp, s));
    auto it = byLength.find(len);
    if (it == byLength.end()) {
      it = byLength.emplace(len, windows_.size()).first;
      windows_.push_back(inputWindow(tgt, cfg, len));
    }
    windowOf_.push_back(it->second);
    std::size_t per = cfg.mode == CampaignMode::Open && !s.children().empty() ? std::max<std::size_t>(cfg.tableSamples, 1) : 1;
    perSample_.push_back(per);
    offsets_.push_back(total_);
    total_ += windows_[windowOf_.back()].size() * per;
  }
}

CoherenceCase CaseStream::at(std::size_t index) const {
  if (index >= total_) throw std::out_of_range("case index out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  std::size_t s = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  // Skip sources with empty windows sharing the same offset.
  while (s + 1 < offsets_.size() && offsets_[s + 1] <= index) ++s;
  std::size_t rem = index - offsets_[s];
  CoherenceCase c;
  c.mode = cfg_.mode;
  c.index = index;
  c.source = sources_[s];
  c.input = windows_[windowOf_[s]][rem / perSample_[s]];
  c.tableSample = rem % perSample_[s];
  return c;
}

namespace {

struct BisimMemoKey {
  std::string compiler;
  std::uint64_t cfgKey;
  std::size_t sample;
  Term a;
  Term b;
  bool operator==(const BisimMemoKey& o) const {
    return compiler == o.compiler && cfgKey == o.cfgKey && sample == o.sample && a == o.a && b == o.b;
  }
};

struct BisimMemoHash {
  std::size_t operator()(const BisimMemoKey& k) const {
    return static_cast<std::size_t>(hashCombine(hashCombine(hashCombine(k.cfgKey, k.sample), k.a.hash()), k.b.hash()));
  }
};

std::uint64_t configKey(const CampaignConfig& cfg) {
  std::uint64_t h = cfg.seed;
  for (std::uint64_t v : {static_cast<std::uint64_t>(cfg.storeCells), static_cast<std::uint64_t>(cfg.maxValue),
                          static_cast<std::uint64_t>(cfg.pcBelow), static_cast<std::uint64_t>(cfg.pcAbove),
                          static_cast<std::uint64_t>(cfg.spMin), static_cast<std::uint64_t>(cfg.spMax),
                          static_cast<std::uint64_t>(cfg.frameLen), static_cast<std::uint64_t>(cfg.depth),
                          static_cast<std::uint64_t>(cfg.samples), static_cast<std::uint64_t>(cfg.varPool),
                          static_cast<std::uint64_t>(cfg.mode)})
    h = hashCombine(h, v);
  return h;
}

thread_local std::unordered_map<BisimMemoKey, BisimResult, BisimMemoHash> bisimMemo;

Term identityCompile(const Term& t) { return t; }

}  // namespace

CaseResult evaluateCase(const CompilerPair& cp, const CampaignConfig& cfg, const CoherenceCase& c, bool widen, bool record) {
  const LangDef& src = language(cp.source, cfg.frameLen);
  const LangDef& tgt = language(cp.target, cfg.frameLen);
  auto compileCont = [&cp](const Term& t) { return compile(cp, t); };

  std::vector<TableEntry> log;
  StepOutcome upper;
  StepOutcome lower;
  Term target = c.source;
  Env envT;

  if (c.mode == CampaignMode::Open) {
    auto base = sampleTables(src, cfg, c.tableSample);
    std::shared_ptr<const std::map<VarId, BehaviorTable>> tables = base;
    if (widen) {
      auto copy = std::make_shared<std::map<VarId, BehaviorTable>>(*base);
      for (auto& [v, t] : *copy) t.widen();
      tables = copy;
    }
    auto lookup = [tables, record, &log](VarId x, const MachineState& s) {
      auto it = tables->find(x);
      if (it == tables->end()) throw IncompleteTable("no behavior table for variable ?x" + std::to_string(x));
      StepOutcome o = it->second(s);
      if (record) log.push_back({x, s, o});
      return o;
    };
    Env envS = [lookup](VarId x) {
      return ChildBehavior{Term::var(x), [lookup, x](const MachineState& s) { return lookup(x, s); }};
    };
    envT = [lookup, &cp](VarId x) {
      return ChildBehavior{Term::var(x), [lookup, x, &cp](const MachineState& s2) {
                             Behavior b = [lookup, x](const MachineState& s) { return lookup(x, s); };
                             return translateBehavior(cp, b, s2, identityCompile);
                           }};
    };
    Behavior source = [&](const MachineState& s) { return extendLaw(src.law, c.source, envS, s); };
    upper = translateBehavior(cp, source, c.input, compileCont);
    target = translateLayer(cp, c.source);
    lower = extendLaw(tgt.law, target, envT, c.input);
  } else {
    Behavior source = [&](const MachineState& s) { return step(src, c.source, s); };
    upper = translateBehavior(cp, source, c.input, compileCont);
    target = compile(cp, c.source);
    lower = step(tgt, target, c.input);
  }

  CaseResult r;
  r.totalized = upper.totalized || lower.totalized;
  auto fail = [&](Divergence d, std::optional<BisimResult> witness) {
    r.ok = false;
    r.counterexample = Counterexample{c, target, upper, lower, d, std::move(log), std::move(witness)};
    return r;
  };

  Divergence d = firstDivergence(upper, lower, false);
  if (d != Divergence::None) return fail(d, std::nullopt);
  if (upper.terminated() || *upper.continuation == *lower.continuation) return r;

  // Continuations differ syntactically: compare them up to bounded
  // bisimilarity in the target under the same variable tables.
  const Term& a = *upper.continuation;
  const Term& b = *lower.continuation;
  BisimMemoKey key{cp.name, configKey(cfg), c.tableSample, a, b};
  auto hit = bisimMemo.find(key);
  BisimResult br;
  if (hit != bisimMemo.end()) {
    br = hit->second;
  } else {
    std::size_t len = tgt.inputKind == StateKind::Pc ? std::max(programLength(a), programLength(b)) : 1;
    auto window = inputWindow(tgt, cfg, len);
    if (c.mode == CampaignMode::Open)
      br = checkBisimOpen(tgt, a, b, envT, window, cfg.depth);
    else
      br = checkBisim(tgt, a, b, window, cfg.depth);
    if (bisimMemo.size() > 200000) bisimMemo.clear();
    bisimMemo.emplace(key, br);
  }
  if (br.equivalent) {
    r.upToBisim = true;
    return r;
  }
  return fail(Divergence::ContinuationTerm, br);
}

namespace {

struct Tally {
  std::size_t cases = 0;
  std::size_t inconclusive = 0;
  std::size_t upToBisim = 0;
  std::size_t totalized = 0;
  std::size_t skipped = 0;
};

Verdict runCampaign(const CompilerPair& cp, const CampaignConfig& cfg) {
  CaseStream stream(cp, cfg);
  Verdict v;
  v.compiler = cp.name;
  v.config = cfg;
  v.sources = stream.sources().size();
  {
    const LangDef& tgt = language(cp.target, cfg.frameLen);
    std::size_t maxLen = 1;
    if (tgt.inputKind == StateKind::Pc)
      for (const auto& s : stream.sources())
        maxLen = std::max(maxLen, programLength(cfg.mode == CampaignMode::Open ? translateLayer(cp, s) : compile(cp, s)));
    v.windowSize = inputWindow(tgt, cfg, maxLen).size();
  }

  constexpr std::size_t kChunk = 2048;
  std::size_t chunks = (stream.size() + kChunk - 1) / kChunk;
  std::vector<Tally> tallies(chunks);
  std::atomic<std::size_t> bestFail{SIZE_MAX};
  std::atomic<std::size_t> nextChunk{0};
  std::mutex mu;
  std::optional<Counterexample> best;

  auto worker = [&]() {
    while (true) {
      std::size_t k = nextChunk.fetch_add(1);
      if (k >= chunks) return;
      std::size_t begin = k * kChunk;
      if (begin > bestFail.load()) continue;
      std::size_t end = std::min(stream.size(), begin + kChunk);
      Tally& t = tallies[k];
      for (std::size_t i = begin; i < end; ++i) {
        if (i > bestFail.load()) break;
        CoherenceCase c = stream.at(i);
        CaseResult r;
        try {
          try {
            r = evaluateCase(cp, cfg, c, false);
          } catch (const IncompleteTable&) {
            r = evaluateCase(cp, cfg, c, true);
          }
        } catch (const IncompleteTable&) {
          ++t.cases;
          ++t.inconclusive;
          continue;
        } catch (const IllFormed&) {
          ++t.skipped;
          continue;
        }
        ++t.cases;
        t.upToBisim += r.upToBisim ? 1 : 0;
        t.totalized += r.totalized ? 1 : 0;
        if (!r.ok) {
          std::lock_guard<std::mutex> lock(mu);
          if (i < bestFail.load()) {
            bestFail.store(i);
            // Re-run with table logging for the report.
            bool widen = false;
            try {
              best = evaluateCase(cp, cfg, c, false, true).counterexample;
            } catch (const IncompleteTable&) {
              widen = true;
            }
            if (widen) best = evaluateCase(cp, cfg, c, true, true).counterexample;
          }
          break;
        }
      }
    }
  };

  unsigned threads = std::max(1U, cfg.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::size_t failIndex = bestFail.load();
  for (std::size_t k = 0; k < chunks; ++k) {
    if (k * kChunk > failIndex) break;
    v.cases += tallies[k].cases;
    v.inconclusive += tallies[k].inconclusive;
    v.upToBisim += tallies[k].upToBisim;
    v.totalized += tallies[k].totalized;
    v.skipped += tallies[k].skipped;
  }
  if (best) {
    v.pass = false;
    v.counterexample = std::move(best);
  }
  return v;
}

}  // namespace

Verdict checkCoherenceOpen(const CompilerPair& cp, const CampaignConfig& cfg) {
  CampaignConfig c = cfg;
  c.mode = CampaignMode::Open;
  return runCampaign(cp, c);
}

Verdict checkCoherenceClosed(const CompilerPair& cp, const CampaignConfig& cfg) {
  CampaignConfig c = cfg;
  c.mode = CampaignMode::Closed;
  return runCampaign(cp, c);
}

Verdict checkCoherence(const CompilerPair& cp, const CampaignConfig& cfg) {
  return cfg.mode == CampaignMode::Open ? checkCoherenceOpen(cp, cfg) : checkCoherenceClosed(cp, cfg);
}

std::optional<Counterexample> replay(const CompilerPair& cp, const CampaignConfig& cfg, const CoherenceCase& c) {
  try {
    return evaluateCase(cp, cfg, c, false, true).counterexample;
  } catch (const IncompleteTable&) {
    return evaluateCase(cp, cfg, c, true, true).counterexample;
  }
}

std::vector<std::pair<Term, Term>> curatedPairs(const std::string& sourceLanguage) {
  using namespace build;
  std::vector<std::pair<Term, Term>> out;
  Term zeroAssign = assign(0, Expr::lit(0));
  if (sourceLanguage == "while" || sourceLanguage == "while-flag" || sourceLanguage == "while-sec") {
    out.emplace_back(loopWhile(Expr::var(0), zeroAssign),
                     loopWhile(Expr::bin(BinOp::Mul, Expr::var(0), Expr::lit(2)), zeroAssign));
    out.emplace_back(loopWhile(Expr::lit(0), assign(0, Expr::lit(1))), loopWhile(Expr::lit(0), assign(1, Expr::lit(1))));
    out.emplace_back(skip(), skip());
  } else if (sourceLanguage == "while-b") {
    out.emplace_back(seq(frame(), assign(0, Expr::bin(BinOp::Add, Expr::var(0), Expr::lit(1)))),
                     seq(frame(), assign(0, Expr::lit(1))));
    out.emplace_back(skip(), skip());
  } else {
    out.emplace_back(skip(), skip());
  }
  return out;
}

namespace {

std::uint64_t fingerprint(const LangDef& lang, const Term& p, const std::vector<MachineState>& inputs, std::size_t depth) {
  std::uint64_t h = 0xF1;
  std::vector<Term> frontier{p};
  for (std::size_t d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<Term> next;
    for (const auto& t : frontier)
      for (const auto& in : inputs) {
        StepOutcome o = step(lang, t, in);
        h = hashCombine(h, o.state.hash());
        h = hashCombine(h, o.label ? static_cast<std::uint64_t>(*o.label) + 1 : 0);
        h = hashCombine(h, o.terminated() ? 1 : 2);
        if (!o.terminated() && next.size() < 4) next.push_back(*o.continuation);
      }
    frontier = std::move(next);
  }
  return h;
}

}  // namespace

PreservationReport checkPreservation(const CompilerPair& cp, const CampaignConfig& cfg,
                                     std::vector<std::pair<Term, Term>> pairs) {
  const LangDef& src = language(cp.source, cfg.frameLen);
  const LangDef& tgt = language(cp.target, cfg.frameLen);
  PreservationReport r;
  r.compiler = cp.name;
  auto srcWindow = inputWindow(src, cfg);

  if (pairs.empty()) {
    pairs = curatedPairs(cp.source);
    // Sampled pairs: random terms bucketed by a short behavioral fingerprint.
    Rng rng(hashCombine(cfg.seed, 0x9A125));
    std::map<std::uint64_t, std::vector<Term>> buckets;
    std::vector<MachineState> probe(srcWindow.begin(), srcWindow.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(srcWindow.size(), 16)));
    std::size_t draws = std::min<std::size_t>(cfg.samples, 400);
    for (std::size_t i = 0; i < draws; ++i) {
      Term t = randomTerm(src.signature, termBounds(src, cfg), cfg.maxTermSize, rng);
      try {
        buckets[fingerprint(src, t, probe, 3)].push_back(t);
      } catch (const IllFormed&) {
      }
    }
    std::size_t sampled = 0;
    for (const auto& [h, terms] : buckets)
      for (std::size_t i = 0; i + 1 < terms.size() && sampled < 200; ++i)
        if (!(terms[i] == terms[i + 1])) {
          pairs.emplace_back(terms[i], terms[i + 1]);
          ++sampled;
        }
  }

  for (const auto& [p, q] : pairs) {
    ++r.pairs;
    try {
      BisimResult s = checkBisim(src, p, q, srcWindow, cfg.depth);
      if (!s.equivalent) continue;
      ++r.sourceEquivalent;
      Term cp1 = compile(cp, p);
      Term cq1 = compile(cp, q);
      std::size_t len = tgt.inputKind == StateKind::Pc ? std::max(programLength(cp1), programLength(cq1)) : 1;
      BisimResult t = checkBisim(tgt, cp1, cq1, inputWindow(tgt, cfg, len), cfg.depth);
      if (t.equivalent)
        ++r.preserved;
      else
        r.violations.push_back({p, q, s, cp1, cq1, t});
    } catch (const IllFormed&) {
      ++r.skipped;
    }
  }
  return r;
}

ContextReport checkContextClosure(const LangDef& lang, const Term& p, const Term& q, const CampaignConfig& cfg,
                                  std::size_t maxLayers) {
  ContextReport r;
  r.language = lang.name;
  auto window = inputWindow(lang, cfg);
  r.base = checkBisim(lang, p, q, window, cfg.depth);
  if (!r.base.equivalent) return r;
  GenBounds bounds = termBounds(lang, cfg);
  auto contexts = sampleContexts(lang.signature, bounds, maxLayers, cfg.samples, hashCombine(cfg.seed, 0xC7C7));
  for (const auto& c : contexts) {
    ++r.contexts;
    BisimResult b = checkBisim(lang, plug(lang.signature, c, p), plug(lang.signature, c, q), window, cfg.depth);
    if (b.equivalent) {
      ++r.closed;
    } else if (!r.violation) {
      r.violation = c;
      r.violationWitness = b;
    }
  }
  return r;
}

bool LawReport::ok() const {
  for (const auto& c : checks)
    if (c.failures > 0 || c.checks == 0) return false;
  return true;
}

LawReport checkLaws(const LangDef& lang, const CampaignConfig& cfg) {
  LawReport report;
  report.language = lang.name;
  LawCheck unit{"unit", 0, 0, {}};
  LawCheck copoint{"copoint", 0, 0, {}};
  LawCheck mult{"multiplication", 0, 0, {}};

  auto full = inputWindow(lang, cfg, 3);
  std::vector<MachineState> inputs;
  std::size_t stride = std::max<std::size_t>(1, full.size() / std::max<std::size_t>(cfg.lawInputs, 1));
  for (std::size_t i = 0; i < full.size() && inputs.size() < cfg.lawInputs; i += stride) inputs.push_back(full[i]);

  GenBounds bounds = termBounds(lang, cfg);
  constexpr VarId kVars = 2;
  std::size_t cap = std::max<std::size_t>(cfg.samples, 1);
  std::vector<Term> terms = enumerateTerms(lang.signature, bounds, 3, kVars, cap);
  if (terms.size() >= cap) {
    Rng rng(hashCombine(cfg.seed, 0x1A575));
    terms.clear();
    for (std::size_t i = 0; i < cap; ++i) terms.push_back(randomTerm(lang.signature, bounds, 3, rng, kVars));
  }
  report.terms = terms.size();

  auto note = [](LawCheck& c, const std::string& what) {
    ++c.failures;
    if (c.firstFailure.empty()) c.firstFailure = what;
  };

  for (std::size_t j = 0; j < std::max<std::size_t>(cfg.tableSamples, 1); ++j) {
    auto base = sampleTables(lang, cfg, j);
    auto tablesCopy = std::make_shared<std::map<VarId, BehaviorTable>>(*base);
    for (auto& [v, t] : *tablesCopy) t.widen();
    std::shared_ptr<const std::map<VarId, BehaviorTable>> tables = tablesCopy;
    Env env = tableEnv(tables);

    for (VarId x = 0; x < cfg.varPool; ++x)
      for (const auto& in : inputs) {
        ++unit.checks;
        if (!(extendLaw(lang.law, Term::var(x), env, in) == tables->at(x)(in)))
          note(unit, "?x" + std::to_string(x) + " at " + toString(in));
      }

    Rng rng(hashCombine(hashCombine(cfg.seed, 0x5167A), j));
    for (std::size_t ti = 0; ti < terms.size(); ++ti) {
      const Term& t = terms[ti];
      std::map<VarId, Term> sigma;
      for (VarId y = 0; y < kVars; ++y) sigma.emplace(y, randomTerm(lang.signature, bounds, 2, rng, kVars));
      Env nested = [&sigma, &lang, &env](VarId y) {
        auto it = sigma.find(y);
        if (it == sigma.end()) return env(y);
        const Term* inner = &it->second;
        return ChildBehavior{*inner, [&lang, &env, inner](const MachineState& s) { return extendLaw(lang.law, *inner, env, s); }};
      };
      Term flat = t.substitute([&sigma](VarId y) {
        auto it = sigma.find(y);
        return it == sigma.end() ? Term::var(y) : it->second;
      });
      for (const auto& in : inputs) {
        try {
          ++copoint.checks;
          auto [threaded, outcome] = extendLawWithTerm(lang.law, t, nested, in);
          if (!(threaded == flat)) note(copoint, "term component differs for term #" + std::to_string(ti));
          ++mult.checks;
          StepOutcome viaFlat = extendLaw(lang.law, flat, env, in);
          if (!(viaFlat == outcome)) note(mult, "term #" + std::to_string(ti) + " at " + toString(in));
        } catch (const Error& e) {
          note(mult, std::string("error: ") + e.what());
        }
      }
    }
  }
  report.checks = {unit, copoint, mult};
  return report;
}

RoundTripReport checkPlugRoundTrip(const LangDef& lang, const CampaignConfig& cfg, std::size_t maxSize) {
  RoundTripReport r;
  r.language = lang.name;
  const Signature& sig = lang.signature;
  auto note = [&r](const std::string& what) {
    ++r.failures;
    if (r.firstFailure.empty()) r.firstFailure = what;
  };
  // Plugging only inspects structure, so payloads come from a minimal
  // alphabet to keep "every term of size <= maxSize" enumerable.
  GenBounds bounds = termBounds(lang, cfg);
  bounds.cells = 1;
  bounds.maxValue = 1;
  bounds.exprDepth = 1;
  bounds.minOffset = -1;
  bounds.maxOffset = 1;
  for (const auto& t : enumerateTerms(sig, bounds, maxSize)) {
    ++r.terms;
    for (const auto& [ctx, sub] : decompositions(sig, t)) {
      ++r.decompositions;
      if (!(plug(sig, ctx, sub) == t)) note("plug " + sexpr(t));
      if (!(plugMulti(sig, toMulti(ctx), sub) == t)) note("plugMulti " + sexpr(t));
    }
    if (!(plugMulti(sig, fromTerm(t), build::skip()) == t)) note("fromTerm " + sexpr(t));
  }
  return r;
}

}  // namespace gsos
