#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "setlocal/graph.hpp"
#include "setlocal/sim.hpp"

namespace setlocal {

// Parameters of one polynomial cover-free-family reduction step from a
// palette of `source` colors to q^2 colors.
//   q > delta * deg   -- a node's q points survive its delta neighbors
//   q^(deg+1) >= m    -- every source color gets its own polynomial
struct LinialParams {
  std::uint64_t q = 0;
  std::uint32_t deg = 0;
  Color source = 0;
  std::uint32_t delta = 0;

  Color target() const { return q * q; }
  friend bool operator==(const LinialParams&, const LinialParams&) = default;
};

bool is_prime(std::uint64_t x);

// Minimizes q^2 over primes q and degrees >= 1; ties go to the smaller degree.
LinialParams linial_params(Color m, std::uint32_t delta);

// F_c = {(a, P_c(a)) : a in GF(q)} where the coefficients of P_c are the
// base-q digits of c-1, least significant first. The pair (a, b) is color
// a*q + b + 1 of the target palette [q^2].
class CoverFreeFamily {
 public:
  // Throws InvalidArgument unless q is prime and the params cover m colors.
  CoverFreeFamily(const LinialParams& params, Color m);

  const LinialParams& params() const noexcept { return params_; }
  Color size() const noexcept { return m_; }
  // P_c(a) mod q.
  std::uint64_t evaluate(Color c, std::uint64_t a) const;
  // Sorted member set F_c, |F_c| = q.
  std::vector<Color> member(Color c) const;
  // min(F_c minus the union of F_n for n in others); throws InvariantViolation
  // if everything is knocked out (only possible when others contains c or
  // exceeds the degree bound).
  Color first_free(Color c, std::span<const Color> others) const;

 private:
  LinialParams params_;
  Color m_;
};

CoverFreeFamily build_family(const LinialParams& params, Color m);

// ceil(m * (1 - 1/(delta+2))), the KW one-round target palette.
Color kw_target(Color m, std::uint32_t delta);

// One round of a staged color-reduction schedule.
struct Stage {
  enum class Kind { Linial, KuhnWattenhofer };
  Kind kind;
  Color from = 0;
  Color to = 0;
  LinialParams linial{};  // Linial stages only
};

// Linial steps while the next target palette is smaller than the current one.
std::vector<Stage> linial_schedule(Color m, std::uint32_t delta);
// KW steps from m down to delta + 1.
std::vector<Stage> kw_schedule(Color m, std::uint32_t delta);

// A program that runs the stages in order, one round each. Every round a
// node broadcasts its current color and recolors from the set of colors it
// hears, so the program is insensitive to multiplicities.
NodeProgram staged_program(std::string name, std::vector<Stage> stages, Color m, std::uint32_t delta);

NodeProgram linial_step_program(Color m, std::uint32_t delta);
NodeProgram linial_full_program(Color m, std::uint32_t delta);
// Throws InvalidArgument if m <= delta + 1 (nothing to reduce).
NodeProgram kw_step_program(Color m, std::uint32_t delta);
// Throws InvalidArgument if m < delta + 2.
NodeProgram delta_plus_one_program(Color m, std::uint32_t delta);

// Palette after each round of a program built from `stages`, starting with m.
std::vector<Color> palette_progression(const std::vector<Stage>& stages, Color m);
std::vector<Stage> delta_plus_one_schedule(Color m, std::uint32_t delta);

// Decodes the color carried in a staged program's state or message.
Color staged_color(const Bytes& bytes);

}  // namespace setlocal
