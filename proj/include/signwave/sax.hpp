#pragma once

// Symbolic aggregate approximation of fixed-length series: z-normalisation,
// piecewise aggregate approximation, Gaussian-quantile symbolisation, the
// lower-bounding word distance, and circular-shift matching for words that
// came from closed contours.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "signwave/errors.hpp"

namespace signwave::sax {

inline constexpr double kFlatStd = 1e-9;  // population std below this counts as flat
inline constexpr int kMinAlphabet = 2;
inline constexpr int kMaxAlphabet = 26;

struct TimeSeries {
    std::vector<double> samples;
    bool degenerate = false;  // set when z-normalisation met a flat series

    TimeSeries() = default;
    TimeSeries(std::initializer_list<double> init) : samples(init) {}
    explicit TimeSeries(std::vector<double> s) : samples(std::move(s)) {}

    std::size_t size() const { return samples.size(); }
};

struct Params {
    int word_length = 36;  // w: PAA segment count
    int alphabet = 6;      // a: symbols per position, 2..26

    friend bool operator==(const Params&, const Params&) = default;
};

inline void validate(const Params& p) {
    if (p.word_length < 1) throw InvalidInput("sax: word length must be >= 1");
    if (p.alphabet < kMinAlphabet || p.alphabet > kMaxAlphabet)
        throw InvalidInput("sax: alphabet size must be in [2, 26]");
}

// A fixed-length symbol string; symbols are 1-based indices in [1, alphabet].
struct Word {
    std::vector<int> symbols;
    Params params;
    int source_length = 0;  // n of the series the word came from

    friend bool operator==(const Word&, const Word&) = default;

    std::string letters() const {
        std::string s;
        s.reserve(symbols.size());
        for (int v : symbols) s.push_back(static_cast<char>('a' + v - 1));
        return s;
    }
};

inline Word word_from_letters(std::string_view letters, Params params, int source_length) {
    validate(params);
    if (static_cast<int>(letters.size()) != params.word_length)
        throw InvalidInput("sax: letter count does not match word length");
    Word w;
    w.params = params;
    w.source_length = source_length;
    w.symbols.reserve(letters.size());
    for (char c : letters) {
        int v = c - 'a' + 1;
        if (v < 1 || v > params.alphabet) throw InvalidInput("sax: letter outside alphabet");
        w.symbols.push_back(v);
    }
    return w;
}

// Mean 0, population standard deviation 1. Flat input (std < kFlatStd) maps
// to all zeros with the degenerate flag set so callers can reject the shape
// instead of dividing by noise.
inline TimeSeries znormalize(const TimeSeries& in) {
    const std::size_t n = in.samples.size();
    if (n == 0) throw InvalidInput("znormalize: empty series");
    double mean = 0.0;
    for (double v : in.samples) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : in.samples) {
        const double d = v - mean;
        var += d * d;
    }
    var /= static_cast<double>(n);
    const double std_dev = std::sqrt(var);

    TimeSeries out;
    out.samples.resize(n);
    if (std_dev < kFlatStd) {
        std::fill(out.samples.begin(), out.samples.end(), 0.0);
        out.degenerate = true;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = (in.samples[i] - mean) / std_dev;
    return out;
}

// Piecewise aggregate approximation. Segment j covers [j*n/w, (j+1)*n/w) in
// sample-index space; samples straddling a boundary contribute fractionally,
// which is equivalent to repeating each sample w times and averaging blocks
// of n. Exact block means when w divides n.
inline TimeSeries paa(const TimeSeries& in, int w) {
    const int n = static_cast<int>(in.samples.size());
    if (n == 0) throw InvalidInput("paa: empty series");
    if (w < 1 || w > n) throw InvalidInput("paa: segment count must be in [1, n]");

    TimeSeries out;
    out.degenerate = in.degenerate;
    out.samples.resize(static_cast<std::size_t>(w));
    const double seg = static_cast<double>(n) / w;
    for (int j = 0; j < w; ++j) {
        const double lo = j * seg;
        const double hi = (j + 1) * seg;
        int i0 = static_cast<int>(std::floor(lo));
        int i1 = std::min(n, static_cast<int>(std::ceil(hi)));
        double acc = 0.0;
        for (int i = i0; i < i1; ++i) {
            const double a = std::max(lo, static_cast<double>(i));
            const double b = std::min(hi, static_cast<double>(i + 1));
            if (b > a) acc += in.samples[static_cast<std::size_t>(i)] * (b - a);
        }
        out.samples[static_cast<std::size_t>(j)] = acc / seg;
    }
    return out;
}

// The a-1 standard-normal quantiles that split the line into a equiprobable
// regions. Built once per alphabet size; the upper half mirrors the lower so
// symmetry holds bit-for-bit.
inline const std::vector<double>& breakpoints(int a) {
    if (a < kMinAlphabet || a > kMaxAlphabet)
        throw InvalidInput("breakpoints: alphabet size must be in [2, 26]");
    static const auto tables = [] {
        std::array<std::vector<double>, kMaxAlphabet + 1> t;
        const boost::math::normal_distribution<double> gauss;
        for (int size = kMinAlphabet; size <= kMaxAlphabet; ++size) {
            auto& cuts = t[static_cast<std::size_t>(size)];
            cuts.resize(static_cast<std::size_t>(size - 1));
            for (int i = 1; i < size; ++i) {
                double& slot = cuts[static_cast<std::size_t>(i - 1)];
                if (2 * i == size) {
                    slot = 0.0;
                } else if (2 * i < size) {
                    slot = boost::math::quantile(gauss, static_cast<double>(i) / size);
                } else {
                    slot = -cuts[static_cast<std::size_t>(size - i - 1)];
                }
            }
        }
        return t;
    }();
    return tables[static_cast<std::size_t>(a)];
}

// Bucket a z-normalised (or degenerate all-zero) series against the alphabet
// breakpoints after aggregation. A value exactly on a breakpoint takes the
// higher symbol.
inline Word sax_word(const TimeSeries& normalized, const Params& params) {
    validate(params);
    const TimeSeries agg = paa(normalized, params.word_length);
    const auto& cuts = breakpoints(params.alphabet);
    Word word;
    word.params = params;
    word.source_length = static_cast<int>(normalized.samples.size());
    word.symbols.reserve(agg.samples.size());
    for (double v : agg.samples) {
        const auto it = std::upper_bound(cuts.begin(), cuts.end(), v);
        word.symbols.push_back(static_cast<int>(it - cuts.begin()) + 1);
    }
    return word;
}

// Cell distance between two symbols: zero for identical or adjacent symbols,
// else the gap between the breakpoints separating them.
inline double symbol_dist(int r, int c, int a) {
    const auto& cuts = breakpoints(a);
    if (r < 1 || r > a || c < 1 || c > a) throw InvalidInput("symbol_dist: symbol out of range");
    if (std::abs(r - c) <= 1) return 0.0;
    const auto [lo, hi] = std::minmax(r, c);
    return cuts[static_cast<std::size_t>(hi - 2)] - cuts[static_cast<std::size_t>(lo - 1)];
}

inline void require_comparable(const Word& u, const Word& v) {
    if (!(u.params == v.params) || u.source_length != v.source_length ||
        u.symbols.size() != v.symbols.size())
        throw InvalidInput("sax: words are not comparable (params or source length differ)");
}

// Word distance that lower-bounds the Euclidean distance of the originating
// z-normalised series (for w | n).
inline double mindist(const Word& u, const Word& v) {
    require_comparable(u, v);
    const int a = u.params.alphabet;
    double sq = 0.0;
    for (std::size_t j = 0; j < u.symbols.size(); ++j) {
        const double d = symbol_dist(u.symbols[j], v.symbols[j], a);
        sq += d * d;
    }
    const double scale = std::sqrt(static_cast<double>(u.source_length) / u.params.word_length);
    return scale * std::sqrt(sq);
}

// Right-rotate by k positions: out[i] = in[(i - k) mod w].
inline Word rotate(const Word& u, int k) {
    const int w = static_cast<int>(u.symbols.size());
    Word out = u;
    if (w == 0) return out;
    k = ((k % w) + w) % w;
    for (int i = 0; i < w; ++i)
        out.symbols[static_cast<std::size_t>(i)] = u.symbols[static_cast<std::size_t>((i - k + w) % w)];
    return out;
}

struct RotationMatch {
    double distance = 0.0;
    int shift = 0;  // right-rotation of the first word that attains the minimum
};

// Minimum mindist over all circular shifts of u against v. Ties resolve to
// an exactly matching shift when one exists, then to the smallest shift.
inline RotationMatch rotation_min_dist(const Word& u, const Word& v) {
    require_comparable(u, v);
    const int w = static_cast<int>(u.symbols.size());
    const int a = u.params.alphabet;
    const double scale = std::sqrt(static_cast<double>(u.source_length) / u.params.word_length);

    double best = std::numeric_limits<double>::infinity();
    bool best_exact = false;
    int best_shift = 0;
    for (int k = 0; k < w; ++k) {
        double sq = 0.0;
        bool exact = true;
        for (int j = 0; j < w; ++j) {
            int idx = j - k;
            if (idx < 0) idx += w;
            const int us = u.symbols[static_cast<std::size_t>(idx)];
            const int vs = v.symbols[static_cast<std::size_t>(j)];
            if (us != vs) exact = false;
            const double d = symbol_dist(us, vs, a);
            sq += d * d;
        }
        const double dist = scale * std::sqrt(sq);
        if (dist < best) {
            best = dist;
            best_exact = exact;
            best_shift = k;
        } else if (dist == best && exact && !best_exact) {
            best_exact = true;
            best_shift = k;
        }
    }
    return {best, best_shift};
}

}  // namespace signwave::sax
