#pragma once

// Centroid-distance signature of a closed contour, resampled at uniform arc
// length, and the full frame-to-word pipeline.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "signwave/contour.hpp"
#include "signwave/errors.hpp"
#include "signwave/image.hpp"
#include "signwave/sax.hpp"

namespace signwave::shape {

struct Signature {
    sax::TimeSeries series;  // raw centroid distances in pixels
    double centroid_x = 0.0;
    double centroid_y = 0.0;
};

// Sample the closed polyline at arc lengths i*L/N and record the Euclidean
// distance to the centroid at each sample point.
inline Signature distance_signature(const Contour& contour, double cx, double cy, int samples) {
    if (samples < 16) throw InvalidInput("signature: sample count must be at least 16");
    if (contour.points.empty()) throw TooSmall("signature: empty contour");

    const std::size_t m = contour.points.size();
    std::vector<double> cumulative(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = contour.points[i];
        const auto& b = contour.points[(i + 1) % m];
        cumulative[i + 1] =
            cumulative[i] + std::hypot(static_cast<double>(b.x - a.x), static_cast<double>(b.y - a.y));
    }
    const double total = cumulative[m];
    if (total < 1e-9) throw TooSmall("signature: contour has no length");

    Signature sig;
    sig.centroid_x = cx;
    sig.centroid_y = cy;
    sig.series.samples.resize(static_cast<std::size_t>(samples));
    std::size_t edge = 0;
    for (int i = 0; i < samples; ++i) {
        const double target = total * static_cast<double>(i) / samples;
        while (edge + 1 < m + 1 && cumulative[edge + 1] <= target) ++edge;
        const auto& a = contour.points[edge % m];
        const auto& b = contour.points[(edge + 1) % m];
        const double span = cumulative[edge + 1] - cumulative[edge];
        const double frac = span > 0.0 ? (target - cumulative[edge]) / span : 0.0;
        const double px = a.x + (b.x - a.x) * frac;
        const double py = a.y + (b.y - a.y) * frac;
        sig.series.samples[static_cast<std::size_t>(i)] = std::hypot(px - cx, py - cy);
    }
    return sig;
}

struct PipelineConfig {
    int threshold = 128;
    img::Polarity polarity = img::Polarity::DarkForeground;
    int signature_samples = 360;  // one per degree of contour by default
    sax::Params sax_params{36, 6};
    double flat_cv = 0.02;  // relative-spread floor below which a shape is degenerate

    void validate() const {
        if (threshold < 0 || threshold > 255) throw InvalidInput("config: threshold must be in [0, 255]");
        if (signature_samples < 16) throw InvalidInput("config: signature samples must be at least 16");
        if (sax_params.word_length > signature_samples)
            throw InvalidInput("config: word length cannot exceed signature samples");
        sax::validate(sax_params);
        if (flat_cv < 0.0) throw InvalidInput("config: flat_cv must be non-negative");
    }
};

struct PipelineResult {
    sax::Word word;
    Signature signature;
    bool degenerate = false;  // signature too flat to be a usable shape
};

// binarize -> largest contour -> region centroid -> distance signature ->
// z-normalise -> symbolise. Near-circular shapes whose signature varies by
// less than flat_cv of its mean are flagged degenerate.
inline PipelineResult image_to_word(const img::GrayImage& frame, const PipelineConfig& cfg) {
    cfg.validate();
    const img::BinaryImage bin = img::binarize(frame, cfg.threshold, cfg.polarity);
    const auto components = find_components(bin);
    const auto& comp = largest_component(components);
    Contour contour = trace_boundary(bin, comp.start);
    if (contour.points.size() < 8) throw TooSmall("largest component boundary has fewer than 8 points");
    const auto [cx, cy] = region_centroid(comp);
    Signature sig = distance_signature(contour, cx, cy, cfg.signature_samples);

    double mean = 0.0;
    for (double v : sig.series.samples) mean += v;
    mean /= static_cast<double>(sig.series.samples.size());
    double var = 0.0;
    for (double v : sig.series.samples) var += (v - mean) * (v - mean);
    var /= static_cast<double>(sig.series.samples.size());
    const bool flat = std::sqrt(var) < std::max(sax::kFlatStd, cfg.flat_cv * std::abs(mean));

    const sax::TimeSeries normalized = sax::znormalize(sig.series);
    sax::Word word = sax::sax_word(normalized, cfg.sax_params);
    return {std::move(word), std::move(sig), flat || normalized.degenerate};
}

}  // namespace signwave::shape
