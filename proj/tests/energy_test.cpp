#include "tadsim/energy/ledger.hpp"
#include "tadsim/errors.hpp"
#include "tadsim/sim/radio.hpp"

#include <doctest.h>

#include <cmath>

using namespace tadsim;
using namespace tadsim::energy;

namespace {

bool close(double a, double b, double rel)
{
    return std::abs(a - b) <= rel * std::abs(b);
}

} // namespace

TEST_CASE("accrue turns residency into energy")
{
    EnergyLedger rx({0.065, 54.33, 56.64});
    rx.accrue(LedgerState::Rx, from_ms(180.0));
    CHECK(close(rx.energy_mj(LedgerState::Rx), 9.78, 0.001));

    EnergyLedger tx({0.065, 54.33, 56.64});
    tx.accrue(LedgerState::Tx, from_ms(800.0));
    CHECK(close(tx.energy_mj(LedgerState::Tx), 45.31, 0.001));

    EnergyLedger empty;
    empty.accrue(LedgerState::Sleep, SimTime::zero());
    CHECK(empty.total_energy_mj() == 0.0);
    CHECK(empty.total_time() == SimTime::zero());
}

TEST_CASE("energy equals time times power for every state")
{
    const PowerProfile p;
    EnergyLedger l(p);
    l.accrue(LedgerState::Sleep, from_ms(920.0));
    l.accrue(LedgerState::Rx, from_ms(80.8));
    l.accrue(LedgerState::Tx, from_ms(0.5));
    l.accrue(LedgerState::Off, from_ms(3.0));
    CHECK(l.energy_mj(LedgerState::Sleep) == l.time(LedgerState::Sleep).count() * p.p_sleep_mw / 1000.0);
    CHECK(l.energy_mj(LedgerState::Rx) == l.time(LedgerState::Rx).count() * p.p_rx_mw / 1000.0);
    CHECK(l.energy_mj(LedgerState::Tx) == l.time(LedgerState::Tx).count() * p.p_tx_mw / 1000.0);
    CHECK(l.energy_mj(LedgerState::Off) == 0.0);
    CHECK(l.total_energy_mj() ==
          l.energy_mj(LedgerState::Sleep) + l.energy_mj(LedgerState::Rx) + l.energy_mj(LedgerState::Tx));
    CHECK(l.total_time() == from_ms(1004.3));
}

TEST_CASE("accrue is additive")
{
    EnergyLedger split, whole;
    split.accrue(LedgerState::Rx, from_ms(12.5));
    split.accrue(LedgerState::Rx, from_ms(7.25));
    whole.accrue(LedgerState::Rx, from_ms(19.75));
    CHECK(split.residency(LedgerState::Rx) == whole.residency(LedgerState::Rx));
    CHECK(split.energy_mj(LedgerState::Rx) == whole.energy_mj(LedgerState::Rx));
}

TEST_CASE("column sums give the expected totals")
{
    // the published cells are rounded to two decimals
    CHECK(0.0006 + 9.78 + 45.31 == doctest::Approx(55.09).epsilon(1e-4));
    CHECK(0.06 + 4.38 + 0.03 == doctest::Approx(4.47).epsilon(1e-9));
    CHECK(EnergyLedger{}.total_energy_mj() == 0.0);
}

TEST_CASE("negative durations and bad profiles are rejected")
{
    EnergyLedger l;
    CHECK_THROWS_AS(l.accrue(LedgerState::Rx, from_ms(-1.0)), SimulationFault);
    CHECK_THROWS_AS((PowerProfile{0.0, 54.2, 56.6}.validate()), ConfigError);
    CHECK_THROWS_AS((PowerProfile{60.0, 54.2, 56.6}.validate()), ConfigError);
    CHECK_NOTHROW(PowerProfile{}.validate());
}

TEST_CASE("switching folds onto RX")
{
    CHECK(ledger_state_for(sim::RadioMode::Switching) == LedgerState::Rx);
    CHECK(ledger_state_for(sim::RadioMode::Off) == LedgerState::Off);
}
