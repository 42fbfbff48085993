#include "ivfn/around_set.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace ivfn {

IntervalFunction around_kernel(const IntervalFunction& g, const MeasurableSet& e, AroundPart part) {
    bool meeting = part == AroundPart::meeting;
    auto eval = [g, e, meeting](const Interval& i) {
        bool meets = e.meets(i);
        if (meets == meeting) return g(i);
        return 0.0;
    };
    HintSource hints = [g, ends = e.endpoints()](const Region& r, int budget) {
        std::vector<Hint> out = g.hints(r, budget);
        out.push_back(Hint{ends, {}});
        return out;
    };
    std::string tag = meeting ? "_E" : "^E";
    return IntervalFunction(g.name() + tag, eval, {false, false, g.flags().continuous}, hints);
}

LimitReport around_limits(const IntervalFunction& g, const MeasurableSet& e, const Region& region,
                          const SearchConfig& cfg, AroundPart part) {
    LimitReport r = estimate_norm_limits(around_kernel(g, e, part), region, cfg);
    r.quantity = part == AroundPart::meeting ? "around" : "around_complement";
    return r;
}

namespace {

// Inner limits per span, shared between threads.
class InnerLimits {
public:
    InnerLimits(IntervalFunction kernel, SearchConfig cfg) : kernel_(std::move(kernel)), cfg_(std::move(cfg)) {}

    std::pair<double, double> at(const Dyadic& lo, const Dyadic& hi) {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find({lo, hi});
            if (it != cache_.end()) return it->second;
        }
        SearchConfig c = cfg_;
        Dyadic len = hi - lo;
        c.e_schedule = {len * Dyadic::pow2(-3), len * Dyadic::pow2(-4)};
        c.threads = 1;
        LimitReport r = estimate_norm_limits(kernel_, Region::interval(lo, hi), c);
        std::pair<double, double> v{r.finest().lower, r.finest().upper};
        std::lock_guard<std::mutex> lock(mutex_);
        cache_.emplace(std::make_pair(lo, hi), v);
        return v;
    }

private:
    IntervalFunction kernel_;
    SearchConfig cfg_;
    std::mutex mutex_;
    std::map<std::pair<Dyadic, Dyadic>, std::pair<double, double>> cache_;
};

}  // namespace

AroundChain around_chain_check(const IntervalFunction& g, const MeasurableSet& e, const Region& region,
                               const SearchConfig& cfg) {
    IntervalFunction kernel = around_kernel(g, e, AroundPart::meeting);
    auto inner = std::make_shared<InnerLimits>(kernel, cfg);
    auto outer = [e, inner](bool upper) {
        return [e, inner, upper](const Interval& i) {
            if (!e.meets(i)) return 0.0;
            auto [lo, hi] = inner->at(i.lo(), i.hi());
            return upper ? hi : lo;
        };
    };
    HintSource hints = [kernel](const Region& r, int budget) { return kernel.hints(r, budget); };
    IntervalFunction h_upper("inner_upper", outer(true), {}, hints);
    IntervalFunction h_lower("inner_lower", outer(false), {}, hints);

    LimitReport direct = estimate_norm_limits(kernel, region, cfg);
    LimitReport it_upper = estimate_norm_limits(h_upper, region, cfg);
    LimitReport it_lower = estimate_norm_limits(h_lower, region, cfg);

    AroundChain out;
    for (std::size_t k = 0; k < direct.levels.size(); ++k) {
        AroundChainLevel l;
        l.e = direct.levels[k].e;
        l.iterated_upper = it_upper.levels[k].upper;
        l.iterated_lower = it_lower.levels[k].lower;
        // concatenated inner witnesses are divisions of the region with norm < e
        l.upper = std::max(direct.levels[k].upper, l.iterated_upper);
        l.lower = std::min(direct.levels[k].lower, l.iterated_lower);
        double tol = cfg.tol;
        if (!(l.lower <= l.iterated_lower + tol && l.iterated_lower <= l.iterated_upper + tol &&
              l.iterated_upper <= l.upper + tol))
            out.holds = false;
        if (l.lower < l.iterated_lower - tol || l.iterated_lower < l.iterated_upper - tol ||
            l.iterated_upper < l.upper - tol)
            out.strict_somewhere = true;
        out.levels.push_back(l);
    }
    return out;
}

}  // namespace ivfn
