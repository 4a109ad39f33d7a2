#include "davoid/sum_of_squares.hpp"

#include <algorithm>
#include <map>

namespace davoid {

namespace {

constexpr unsigned long kTrialLimit = 1u << 14;

const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<bool> sieve(kTrialLimit + 1, true);
    std::vector<unsigned long> out;
    for (unsigned long i = 2; i <= kTrialLimit; ++i) {
      if (!sieve[i]) continue;
      out.push_back(i);
      for (unsigned long j = i * i; j <= kTrialLimit; j += i) sieve[j] = false;
    }
    return out;
  }();
  return primes;
}

bool is_probable_prime(const Integer& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

unsigned long mod4(const Integer& n) { return mpz_fdiv_ui(n.get_mpz_t(), 4); }

// Brent's variant of Pollard rho; returns a nontrivial factor or 0.
Integer pollard_brent(const Integer& n, unsigned long c, std::uint64_t& budget) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  Integer y = 2, x, ys, q = 1, g = 1, tmp;
  const std::uint64_t m = 128;
  std::uint64_t r = 1;
  auto step = [&](Integer& v) {
    v = v * v + c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) step(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const std::uint64_t lim = std::min(m, r - k);
      for (std::uint64_t i = 0; i < lim; ++i) {
        step(y);
        tmp = abs(x - y);
        q *= tmp;
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      if (budget < lim) {
        budget = 0;
        return 0;
      }
      budget -= lim;
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += m;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      step(ys);
      tmp = abs(x - ys);
      mpz_gcd(g.get_mpz_t(), tmp.get_mpz_t(), n.get_mpz_t());
      if (budget == 0) return 0;
      --budget;
    } while (g == 1);
  }
  return g == n ? Integer(0) : g;
}

bool split_into(const Integer& n, std::map<Integer, unsigned>& out, std::uint64_t& budget) {
  if (n == 1) return true;
  if (is_probable_prime(n)) {
    ++out[n];
    return true;
  }
  Integer root;
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    std::map<Integer, unsigned> half;
    if (!split_into(root, half, budget)) return false;
    for (auto& [p, e] : half) out[p] += 2 * e;
    return true;
  }
  for (unsigned long c = 1; c < 64; ++c) {
    Integer f = pollard_brent(n, c, budget);
    if (f == 0 && budget == 0) return false;
    if (f != 0 && f != n) {
      return split_into(f, out, budget) && split_into(Integer(n / f), out, budget);
    }
  }
  return false;
}

bool is_square(const Integer& k) { return mpz_perfect_square_p(k.get_mpz_t()) != 0; }

}  // namespace

std::optional<std::vector<std::pair<Integer, unsigned>>> factorize(const Integer& n_in,
                                                                   std::uint64_t budget) {
  if (n_in <= 0) throw ConfigError("factorize needs a positive integer");
  Integer n = n_in;
  std::map<Integer, unsigned> found;
  for (unsigned long p : small_primes()) {
    if (Integer(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++found[Integer(p)];
    }
  }
  if (n > 1 && !split_into(n, found, budget)) return std::nullopt;
  return std::vector<std::pair<Integer, unsigned>>(found.begin(), found.end());
}

SumOfSquaresVerdict classify_sum_of_squares(int d, const Integer& k, std::uint64_t factor_budget) {
  if (d < 1) throw ConfigError("dimension must be at least 1");
  if (k < 0) throw ConfigError("representability needs k >= 0");
  SumOfSquaresVerdict out;
  auto rep = [&] {
    out.verdict = Representability::Representable;
    return out;
  };
  auto nonrep = [&](Integer cofactor, unsigned long four_power) {
    out.verdict = Representability::NotRepresentable;
    out.witness.cofactor = std::move(cofactor);
    out.witness.four_power = four_power;
    return out;
  };
  if (k == 0 || d >= 4) return rep();
  if (d == 1) return is_square(k) ? rep() : nonrep(0, 0);
  if (d == 3) {
    Integer m = k;
    unsigned long a = 0;
    while (mpz_divisible_2exp_p(m.get_mpz_t(), 2)) {
      mpz_fdiv_q_2exp(m.get_mpz_t(), m.get_mpz_t(), 2);
      ++a;
    }
    return mpz_fdiv_ui(m.get_mpz_t(), 8) == 7 ? nonrep(0, a) : rep();
  }

  // d == 2. Cheapest witness first: the odd part is 3 mod 4.
  Integer rest = k;
  mpz_fdiv_q_2exp(rest.get_mpz_t(), rest.get_mpz_t(), mpz_scan1(rest.get_mpz_t(), 0));
  if (mod4(rest) == 3) return nonrep(rest, 0);
  for (unsigned long p : small_primes()) {
    if (p == 2) continue;
    if (Integer(p) * p > rest) break;
    if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
    Integer power = 1;
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      power *= p;
      ++e;
    }
    if (p % 4 == 3 && e % 2 == 1) return nonrep(power, 0);
    // The untouched cofactor is coprime to everything divided out so far.
    if (rest > 1 && mod4(rest) == 3) return nonrep(rest, 0);
  }
  if (rest == 1) return rep();
  if (mod4(rest) == 3) return nonrep(rest, 0);
  std::uint64_t budget = factor_budget;
  std::map<Integer, unsigned> primes;
  if (!split_into(rest, primes, budget)) return out;  // Unknown
  for (const auto& [p, e] : primes) {
    if (mod4(p) == 3 && e % 2 == 1) return nonrep(pow(p, e), 0);
  }
  return rep();
}

bool representable(int d, const Integer& k, std::uint64_t factor_budget) {
  auto v = classify_sum_of_squares(d, k, factor_budget);
  if (v.verdict == Representability::Unknown) {
    throw BudgetExceeded("factorization budget exceeded deciding whether " + to_string(k) +
                         " is a sum of two squares");
  }
  return v.verdict == Representability::Representable;
}

bool check_witness(int d, const Integer& k, const NonRepresentabilityWitness& w) {
  if (k < 0) return false;
  if (d >= 4 || k == 0) return false;
  if (d == 1) return !is_square(k);
  if (d == 2) {
    const Integer& m = w.cofactor;
    if (m <= 0 || mod4(m) != 3 || !mpz_divisible_p(k.get_mpz_t(), m.get_mpz_t())) return false;
    Integer other = k / m;
    Integer g;
    mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), other.get_mpz_t());
    return g == 1;
  }
  // d == 3
  if (w.four_power > mpz_sizeinbase(k.get_mpz_t(), 2)) return false;
  Integer q = pow(Integer(4), w.four_power);
  if (!mpz_divisible_p(k.get_mpz_t(), q.get_mpz_t())) return false;
  return mpz_fdiv_ui(Integer(k / q).get_mpz_t(), 8) == 7;
}

std::optional<IntegerVector> find_decomposition(int d, const Integer& k, std::uint64_t budget) {
  if (k < 0 || d < 1) return std::nullopt;
  std::uint64_t steps = 0;
  IntegerVector v(d, 0);
  // Descending search with x_1 >= x_2 >= ... >= x_d >= 0.
  auto rec = [&](auto&& self, int i, const Integer& rem, const Integer& cap) -> bool {
    if (++steps > budget) return false;
    if (i == d - 1) {
      if (!is_square(rem)) return false;
      Integer r;
      mpz_sqrt(r.get_mpz_t(), rem.get_mpz_t());
      if (r > cap) return false;
      v[i] = r;
      return true;
    }
    Integer top;
    mpz_sqrt(top.get_mpz_t(), rem.get_mpz_t());
    if (top > cap) top = cap;
    const int left = d - i;
    for (Integer x = top; x >= 0; --x) {
      // The remaining coordinates are at most x each.
      if (x * x * left < rem) break;
      v[i] = x;
      if (self(self, i + 1, Integer(rem - x * x), x)) return true;
      if (steps > budget) return false;
    }
    return false;
  };
  if (rec(rec, 0, k, k)) return v;
  return std::nullopt;
}

}  // namespace davoid
