"""Decay-curve rendering for muskat trajectory CSVs."""

from .render import PlotError, PlotSpec, RenderResult, render_decay
