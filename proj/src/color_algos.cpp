#include "setlocal/color_algos.hpp"

#include <algorithm>
#include <memory>

#include "setlocal/error.hpp"

namespace setlocal {

namespace {

// base^exp, saturating at UINT64_MAX.
std::uint64_t saturating_pow(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t result = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (result > UINT64_MAX / base) return UINT64_MAX;
    result *= base;
  }
  return result;
}

void put_u64(Bytes& out, std::uint64_t x) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((x >> shift) & 0xFF));
}

std::uint64_t get_u64(const Bytes& in, std::size_t pos) {
  if (in.size() < pos + 8) throw InvalidArgument("short color message");
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < 8; ++i) x = (x << 8) | static_cast<std::uint8_t>(in[pos + i]);
  return x;
}

Bytes color_message(Color c) {
  Bytes b;
  put_u64(b, c);
  return b;
}

Bytes staged_state(Color c, std::uint64_t round) {
  Bytes b;
  put_u64(b, c);
  put_u64(b, round);
  return b;
}

}  // namespace

bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t p = 2; p * p <= x; ++p) {
    if (x % p == 0) return false;
  }
  return true;
}

LinialParams linial_params(Color m, std::uint32_t delta) {
  if (m < 2) throw InvalidArgument("linial_params needs m >= 2");
  if (delta < 1) throw InvalidArgument("linial_params needs delta >= 1");
  for (std::uint64_t q = 2;; ++q) {
    if (!is_prime(q)) continue;
    for (std::uint32_t deg = 1; static_cast<std::uint64_t>(delta) * deg < q; ++deg) {
      if (saturating_pow(q, deg + 1) >= m) return {q, deg, m, delta};
    }
  }
}

CoverFreeFamily::CoverFreeFamily(const LinialParams& params, Color m) : params_(params), m_(m) {
  if (!is_prime(params.q)) throw InvalidArgument("q = " + std::to_string(params.q) + " is not prime");
  if (params.deg < 1 || params.deg > 63) throw InvalidArgument("polynomial degree must lie in [1, 63]");
  if (saturating_pow(params.q, params.deg + 1) < m) throw InvalidArgument("too few polynomials for m colors");
  if (static_cast<std::uint64_t>(params.delta) * params.deg >= params.q) {
    throw InvalidArgument("q must exceed delta * deg");
  }
}

std::uint64_t CoverFreeFamily::evaluate(Color c, std::uint64_t a) const {
  if (c < 1 || c > m_) throw InvalidArgument("color outside the family's palette");
  const std::uint64_t q = params_.q;
  // Horner from the most significant digit.
  std::uint64_t digits[64];
  std::uint64_t rest = c - 1;
  for (std::uint32_t i = 0; i <= params_.deg; ++i) {
    digits[i] = rest % q;
    rest /= q;
  }
  std::uint64_t value = 0;
  for (std::uint32_t i = params_.deg + 1; i-- > 0;) value = (value * a + digits[i]) % q;
  return value;
}

std::vector<Color> CoverFreeFamily::member(Color c) const {
  std::vector<Color> out;
  out.reserve(params_.q);
  for (std::uint64_t a = 0; a < params_.q; ++a) out.push_back(a * params_.q + evaluate(c, a) + 1);
  return out;
}

Color CoverFreeFamily::first_free(Color c, std::span<const Color> others) const {
  const std::uint64_t q = params_.q;
  for (std::uint64_t a = 0; a < q; ++a) {
    const std::uint64_t y = evaluate(c, a);
    bool hit = false;
    for (Color o : others) {
      if (evaluate(o, a) == y) {
        hit = true;
        break;
      }
    }
    if (!hit) return a * q + y + 1;
  }
  throw InvariantViolation("cover-free family exhausted for color " + std::to_string(c));
}

CoverFreeFamily build_family(const LinialParams& params, Color m) { return CoverFreeFamily(params, m); }

Color kw_target(Color m, std::uint32_t delta) {
  const std::uint64_t num = static_cast<std::uint64_t>(delta) + 1;
  const std::uint64_t den = static_cast<std::uint64_t>(delta) + 2;
  return (m * num + den - 1) / den;
}

std::vector<Stage> linial_schedule(Color m, std::uint32_t delta) {
  std::vector<Stage> stages;
  Color palette = m;
  while (palette >= 2) {
    const LinialParams p = linial_params(palette, delta);
    if (p.target() >= palette) break;
    stages.push_back({Stage::Kind::Linial, palette, p.target(), p});
    palette = p.target();
  }
  return stages;
}

std::vector<Stage> kw_schedule(Color m, std::uint32_t delta) {
  std::vector<Stage> stages;
  Color palette = m;
  while (palette > static_cast<Color>(delta) + 1) {
    const Color next = kw_target(palette, delta);
    stages.push_back({Stage::Kind::KuhnWattenhofer, palette, next, {}});
    palette = next;
  }
  return stages;
}

std::vector<Stage> delta_plus_one_schedule(Color m, std::uint32_t delta) {
  std::vector<Stage> stages = linial_schedule(m, delta);
  const Color after = stages.empty() ? m : stages.back().to;
  for (const Stage& s : kw_schedule(after, delta)) stages.push_back(s);
  return stages;
}

std::vector<Color> palette_progression(const std::vector<Stage>& stages, Color m) {
  std::vector<Color> out{m};
  for (const Stage& s : stages) out.push_back(s.to);
  return out;
}

Color staged_color(const Bytes& bytes) { return get_u64(bytes, 0); }

NodeProgram staged_program(std::string name, std::vector<Stage> stages, Color m, std::uint32_t delta) {
  struct Plan {
    std::vector<Stage> stages;
    std::vector<std::unique_ptr<CoverFreeFamily>> families;
    Color m;
    std::uint32_t delta;
  };
  auto plan = std::make_shared<Plan>();
  plan->m = m;
  plan->delta = delta;
  for (const Stage& s : stages) {
    plan->families.push_back(s.kind == Stage::Kind::Linial ? std::make_unique<CoverFreeFamily>(s.linial, s.from)
                                                           : nullptr);
  }
  plan->stages = std::move(stages);

  NodeProgram p;
  p.name = std::move(name);
  p.init = [plan](Color own, const ProgramParams& params) {
    if (params.m > plan->m || params.delta > plan->delta) {
      throw InvalidArgument("graph parameters exceed the program's (m, delta)");
    }
    if (own < 1 || own > plan->m) throw InvalidArgument("initial color outside [1, m]");
    return Transition{staged_state(own, 0), color_message(own)};
  };
  p.step = [plan](const Bytes& state, const Inbox& inbox) {
    const Color own = get_u64(state, 0);
    const std::uint64_t round = get_u64(state, 8);
    if (round >= plan->stages.size()) throw InvalidArgument("step past the end of the schedule");
    const Stage& stage = plan->stages[round];
    std::vector<Color> heard;
    heard.reserve(inbox.messages.size());
    for (const auto& [msg, count] : inbox.messages) heard.push_back(get_u64(msg, 0));

    Color next = own;
    if (stage.kind == Stage::Kind::Linial) {
      next = plan->families[round]->first_free(own, heard);
    } else if (own > stage.to) {
      const std::uint64_t width = static_cast<std::uint64_t>(plan->delta) + 1;
      const std::uint64_t i = own - stage.to - 1;
      next = 0;
      for (Color c = i * width + 1; c <= (i + 1) * width; ++c) {
        if (std::find(heard.begin(), heard.end(), c) == heard.end()) {
          next = c;
          break;
        }
      }
      if (next == 0) throw InvariantViolation("KW range exhausted; more than delta distinct neighbor colors");
    }
    return Transition{staged_state(next, round + 1), color_message(next)};
  };
  p.finalize = [](const Bytes& state) { return get_u64(state, 0); };
  p.round_budget = [plan](const ProgramParams&) { return static_cast<std::uint32_t>(plan->stages.size()); };
  p.palette = [plan](const ProgramParams&) { return plan->stages.empty() ? plan->m : plan->stages.back().to; };
  return p;
}

NodeProgram linial_step_program(Color m, std::uint32_t delta) {
  const LinialParams p = linial_params(m, delta);
  return staged_program("linial-step", {{Stage::Kind::Linial, m, p.target(), p}}, m, delta);
}

NodeProgram linial_full_program(Color m, std::uint32_t delta) {
  return staged_program("linial", linial_schedule(m, delta), m, delta);
}

NodeProgram kw_step_program(Color m, std::uint32_t delta) {
  if (m <= static_cast<Color>(delta) + 1) {
    throw InvalidArgument("KW step needs m > delta + 1; the palette is already at the target");
  }
  return staged_program("kw-step", {{Stage::Kind::KuhnWattenhofer, m, kw_target(m, delta), {}}}, m, delta);
}

NodeProgram delta_plus_one_program(Color m, std::uint32_t delta) {
  if (m < static_cast<Color>(delta) + 2) throw InvalidArgument("delta1 needs m >= delta + 2");
  return staged_program("delta1", delta_plus_one_schedule(m, delta), m, delta);
}

}  // namespace setlocal
