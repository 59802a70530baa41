import logging
from typing import Optional

import click

from gravcorr.models.params import GRAVITATIONAL_CONSTANT, Coupling, PhysicalParams, derive_coupling
from gravcorr.utils.run_config import build_run_config

from .common import guarded
from .evolve import cmd_evolve

logger = logging.getLogger(__name__)


def cmd_physical(params: PhysicalParams, then_evolve: bool = False, config_path: Optional[str] = None,
                 overrides: Optional[dict] = None) -> Coupling:
    """
    Derive the spring constant K and coupling eta from SI parameters.

    With ``then_evolve`` the derived eta replaces the configured one and an
    evolve run follows.
    """
    coupling = derive_coupling(params)
    click.echo(f"K = {coupling.K:.17g}")
    click.echo(f"eta = {coupling.eta:.17g}")
    if then_evolve:
        cfg = build_run_config(config_path, {**(overrides or {}), "eta": coupling.eta})
        cmd_evolve(cfg)
    return coupling


@click.command("physical")
@click.option("--G", "G", type=float, default=GRAVITATIONAL_CONSTANT, show_default=True,
              help="Gravitational constant [m^3 kg^-1 s^-2].")
@click.option("--m1", type=float, required=True, help="Mass 1 [kg].")
@click.option("--m2", type=float, required=True, help="Mass 2 [kg].")
@click.option("--d", "d", type=float, required=True, help="Separation [m].")
@click.option("--omega", type=float, required=True, help="Trap angular frequency [rad/s].")
@click.option("--then-evolve", is_flag=True, default=False, help="Run evolve with the derived eta.")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@click.option("--model", type=click.Choice(["ktm", "dktm", "unitary"]), default=None)
@click.option("--tau-max", type=float, default=None)
@click.option("--n-samples", type=int, default=None)
@click.option("--output-path", "-o", type=click.Path(dir_okay=False), default=None)
@guarded
def physical(G, m1, m2, d, omega, then_evolve, config_path, **overrides):
    """Print K and eta for two trapped masses, optionally evolving with that eta."""
    params = PhysicalParams(G=G, m1=m1, m2=m2, d=d, omega=omega)
    cmd_physical(params, then_evolve, config_path, overrides)
