"""
Scenario tables
---------------

Each ``*_table`` function turns a validated ``ScenarioConfig`` into a
``pandas.DataFrame`` whose column order is fixed:

* ``evolve`` (diagnostics): tau, abs_rho_12, arg_rho_12, gamma_vac, gamma_i,
  purity, coherence_l1.  ``rho_12`` is the element between the first two
  packet points; gamma_vac and gamma_i are its time-dependent exponents.
* ``evolve`` (elements): tau, i, j, abs_rho, arg_rho for every i <= j,
  indices counted from 1.
* ``figure1``: tau, then abs_gamma_vac_Q<value> for each requested Q.
* ``sweep``: Q, tau, gamma_vac, abs_factor, rows ordered by Q then tau.

``write_csv`` serialises any of them with 17 significant digits and LF
line endings, so identical configurations give identical bytes.
"""

from __future__ import annotations

import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import IO, List, Optional, Union

import numpy as np
import pandas as pd

from ..models.scenario import OutputKind, ScenarioConfig, q_label
from ..services.decoherence import gamma_vac_partial_curve
from ..services.density import (
    coherence_l1,
    element_exponent,
    evolve,
    initial_exponent,
    purity,
)

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.16e"

EVOLVE_COLUMNS = [
    "tau", "abs_rho_12", "arg_rho_12", "gamma_vac", "gamma_i", "purity", "coherence_l1",
]
ELEMENT_COLUMNS = ["tau", "i", "j", "abs_rho", "arg_rho"]
SWEEP_COLUMNS = ["Q", "tau", "gamma_vac", "abs_factor"]


def q_column(q: float) -> str:
    return f"abs_gamma_vac_Q{q_label(q)}"


def evolve_table(config: ScenarioConfig) -> pd.DataFrame:
    params = config.params()
    packet = config.packet.build()
    options = config.evolve_options()
    taus = config.tau.values()

    u0, u1 = packet.momenta[0], packet.momenta[1]
    q01 = params.coupling * (u0 - u1) ** 2
    qp01 = params.coupling * (u0 * u0 - u1 * u1)

    rows: List[list] = []
    for tau in taus:
        rho = evolve(packet, params, config.regime, float(tau), options)
        if config.outputs is OutputKind.ELEMENTS:
            for i in range(rho.dim):
                for j in range(i, rho.dim):
                    value = rho.entries[i, j]
                    rows.append(
                        [float(tau), i + 1, j + 1, float(abs(value)), float(np.angle(value))]
                    )
            continue
        gamma = element_exponent(q01, qp01, params, config.regime, float(tau), options)
        value = rho.element(0, 1)
        rows.append([
            float(tau), abs(value), float(np.angle(value)),
            gamma.gamma_real, gamma.gamma_imag, purity(rho), coherence_l1(rho),
        ])

    columns = ELEMENT_COLUMNS if config.outputs is OutputKind.ELEMENTS else EVOLVE_COLUMNS
    logger.info("evolve: %d rows (%s, n=%d)", len(rows), config.regime.value, packet.size)
    return pd.DataFrame(rows, columns=columns)


def figure1_table(config: ScenarioConfig) -> pd.DataFrame:
    """|Gamma_vac(tau)| of the partially correlated state for each Q."""
    taus = config.tau.values()
    frame = pd.DataFrame({"tau": taus})
    for q in config.figure1.q:
        frame[q_column(q)] = np.abs(gamma_vac_partial_curve(q, taus))
    logger.info("figure1: %d tau points x %d curves", len(taus), len(config.figure1.q))
    return frame


def _sweep_rows(config: ScenarioConfig, q: float) -> List[list]:
    params = config.params()
    options = config.evolve_options()
    dressing = initial_exponent(q, params, config.regime, options)
    rows = []
    for tau in config.tau.values():
        gamma = element_exponent(q, 0.0, params, config.regime, float(tau), options)
        rows.append([q, float(tau), gamma.gamma_real, float(np.exp(gamma.gamma_real + dressing))])
    return rows


def sweep_table(config: ScenarioConfig, jobs: int = 1) -> pd.DataFrame:
    """Magnitude exponent and |rho_ij / C_i C_j^*| over a list of Q values.

    Q values are evaluated on ``jobs`` worker threads; ``Executor.map``
    yields results in submission order, so the table does not depend on
    scheduling.
    """
    qs = list(config.sweep.q)
    if jobs > 1 and len(qs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(lambda q: _sweep_rows(config, q), qs))
    else:
        chunks = [_sweep_rows(config, q) for q in qs]
    rows = [row for chunk in chunks for row in chunk]
    logger.info("sweep: %d rows over %d Q values (%s)", len(rows), len(qs), config.regime.value)
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def to_csv_text(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_csv(frame: pd.DataFrame, out: Optional[Union[str, IO[str]]] = None) -> None:
    """Write ``frame`` to a path, an open text stream, or standard output."""
    text = to_csv_text(frame)
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    elif isinstance(out, str):
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        out.write(text)


def run_scenario(command: str, config: ScenarioConfig, jobs: int = 1) -> pd.DataFrame:
    """
    Build the table for a scenario subcommand.

    Parameters
    ----------
    command : str
        One of ``evolve``, ``figure1`` or ``sweep``.
    config : ScenarioConfig
        Validated scenario.
    jobs : int
        Worker threads for ``sweep``; ignored by the other commands.

    Returns
    -------
    pandas.DataFrame
        Table with the fixed column order of the command, ready for
        ``write_csv``.
    """
    if command == "evolve":
        return evolve_table(config)
    if command == "figure1":
        return figure1_table(config)
    if command == "sweep":
        return sweep_table(config, jobs)
    raise ValueError(f"unknown scenario command {command!r}")
