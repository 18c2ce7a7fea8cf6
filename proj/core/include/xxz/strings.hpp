#pragma once

#include <optional>
#include <string>
#include <vector>

namespace xxz {

class DressedSet;

struct StringSpec {
    int r = 1;
    bool exists = false;
    int sigma = 0;        // carrier line R + i sigma pi/2 (meaningful when exists)
    int sgn_p_prime = 0;  // sign of p'_r on the carrier line, 0 when unknown/absent
    std::string regime;   // "takahashi", "small-zeta", "both" or "one-string"
};

struct ExistenceVerdict {
    bool exists = false;
    int sigma = 0;

    bool operator==(const ExistenceVerdict& o) const
    {
        return exists == o.exists && (!exists || sigma == o.sigma);
    }
};

// (-1)^sigma sin(k zeta) sin((r-k) zeta) > 0 for k = 1..r-1
ExistenceVerdict takahashi_condition(int r, double zeta);
// conditions for 0 < zeta < pi/2 over the w_p blocks; parity kappa_r mod 2
ExistenceVerdict small_zeta_condition(int r, double zeta);

StringSpec string_exists(int r, double zeta);

// Sign of p'_r sampled at five points of the carrier line.
int momentum_sign(int r, const DressedSet& ds);

std::vector<StringSpec> catalog(double zeta, int r_max, const DressedSet& ds);

bool check_condition_equivalence(double zeta, int r);

// Built-in reproduction of the reference existence tables for r = 2..8.
enum class SignRule { plus, minus, s_r, minus_s_r, s2_s3 };

struct TableEntry {
    int r = 0;
    double lo = 0.0;  // zeta interval in units of pi
    double hi = 0.0;
    int sigma = 0;
    SignRule rule = SignRule::s_r;
};

const std::vector<TableEntry>& reference_tables();
// nullopt when the tables list no string of length r at this zeta
std::optional<TableEntry> table_lookup(int r, double zeta);
int table_sign(const TableEntry& entry, double zeta);

} // namespace xxz
