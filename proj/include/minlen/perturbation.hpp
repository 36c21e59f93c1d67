#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "minlen/spectrum.hpp"

namespace minlen {

enum class SeriesFamily { Cutoff, InverseSqrt };
enum class SeriesRegime { DistinctMasses, Identical };

/**
 * Sign of the order-beta bracket in the InverseSqrt series. The bracket
 * (p0^4/(32 mu) + 3 mu pi^2 p0^2/(4 kappa^2) - 3 mu^3 pi^4/(2 kappa^4) - 24 mu^3 pi^2/kappa^4) beta
 * is added to the energy (Corrected, re-derived by direct expansion of the
 * quantization condition) or subtracted from it (AsPrinted). See NOTES.md.
 */
enum class Transcription { Corrected, AsPrinted };

struct SeriesTerm {
  std::string label;
  /// Power of the expansion parameter (1/b or sqrt(beta)) carried by the term.
  int order;
  double value;
};

struct SeriesPrediction {
  std::vector<SeriesTerm> terms;
  double total = 0.0;
  SeriesFamily family = SeriesFamily::Cutoff;
  SeriesRegime regime = SeriesRegime::DistinctMasses;
  std::vector<std::string> warnings;

  /// Sum of the terms of order <= max_order.
  double partial_sum(int max_order) const;
  /// Value of the term with the given label; throws std::out_of_range if absent.
  double term(std::string_view label) const;
};

/// E = p0^2/2M - pi^2 mu/(2 kappa^2) + 2 pi^2 mu^2/(kappa^3 b2) - 6 pi^2 mu^3/(kappa^4 b2^2).
/// Requires b1 != b2; warns when |p0| > 0.1 (b1 - b2).
SeriesPrediction series_cutoff_distinct(const TwoBodySystem& sys, double kappa, double p0, double b2);

/// Identical particles: the order-1/b^2 term is multiplied by (1 - 2 kappa |p0| / (3 M)),
/// itemised as a p0-independent term and "order2_over_b2_p0" = 4 pi^2 mu^3 |p0| / (kappa^3 M b^2).
SeriesPrediction series_cutoff_identical(const TwoBodySystem& sys, double kappa, double p0, double b);

/// Identical particles, g(p) = p / sqrt(1 - beta p^2): terms through order beta.
SeriesPrediction series_inversesqrt_identical(const TwoBodySystem& sys, double kappa, double p0, double beta,
                                              Transcription transcription = Transcription::Corrected);

/// E0 = p0^2/2M - 2 pi^2 mu U0^2 (delta) or p0^2/2M - mu alpha^2 / (2 hbar^2 (n + delta)^2) (Coulomb).
double undeformed_baseline(const TwoBodySystem& sys, const Interaction& interaction, double p0,
                           std::optional<int> n = std::nullopt);

} // namespace minlen
