#!/usr/bin/env python3
"""
Deflicker Pipeline Demo

Generates the default fluorescent-light scene, filters it and prints the
flicker attenuation and SNR before and after.

Usage:
    python demo.py [--duration 1.5] [--seed 0] [--workers 2]
"""

import sys
import os
import time
import argparse
import logging

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from comb import FilterConfig, filter_stream
from metrics import snr, snr_improvement, flicker_fraction
from spectral import window_psd, attenuation_at
from synth import default_scene, generate


def run_demo(duration: float, seed: int, workers: int, console: Console) -> None:
    """Synthesize, filter and evaluate one scene"""
    scene = default_scene(duration=duration, seed=seed)
    region = scene.flicker.region

    console.print(f"🎬 Generating {duration}s scene (seed {seed})...")
    raw = generate(scene)

    config = FilterConfig.from_base_frequency(50.0, rho1=0.6, contrast=scene.contrast)
    console.print(f"🔧 Filtering {len(raw)} events with {workers} worker(s)...")
    started = time.perf_counter()
    filtered = filter_stream(raw.events, scene.geometry, config, workers=workers)
    elapsed = time.perf_counter() - started

    t_start, t_end = 0.2, min(1.2, duration)
    raw_psd = window_psd(raw.events, region, 1000.0, t_start, t_end, scene.contrast)
    filtered_psd = window_psd(filtered, region, 1000.0, t_start, t_end, scene.contrast)
    attenuation = attenuation_at(raw_psd, filtered_psd, 100.0, 4.0)

    raw_report = snr(raw.events, labels=raw.labels)
    filtered_report = snr(filtered, region=region)

    table = Table(title="Deflicker demo")
    table.add_column("metric", style="cyan")
    table.add_column("raw", justify="right")
    table.add_column("filtered", justify="right")
    table.add_row("events", str(len(raw)), str(len(filtered)))
    table.add_row("flicker events", str(raw_report.flicker_count), str(filtered_report.flicker_count))
    table.add_row("foreground events", str(raw_report.foreground_count),
                  str(filtered_report.foreground_count))
    table.add_row("flicker fraction", f"{flicker_fraction(raw_report):.1%}",
                  f"{(flicker_fraction(filtered_report) or 0.0):.1%}")
    console.print(table)

    console.print(f"⏱️  Filter time: {elapsed:.2f}s")
    console.print(f"📉 Attenuation at 100 Hz over [{t_start}, {t_end}): {attenuation:.1f} dB")
    if raw_report.defined and filtered_report.defined:
        console.print(f"📈 Relative SNR improvement: {snr_improvement(raw_report, filtered_report):.2f}")


def main():
    """Main demo function"""
    parser = argparse.ArgumentParser(description="Deflicker pipeline demo")
    parser.add_argument('--duration', type=float, default=1.5, help='Scene duration (s)')
    parser.add_argument('--seed', type=int, default=0, help='Scene seed')
    parser.add_argument('--workers', type=int, default=2, help='Filter worker processes')
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO, format='%(message)s', handlers=[RichHandler(show_path=False)])
    console = Console()
    console.print("=" * 50)
    console.print("   Deflicker Pipeline Demo")
    console.print("=" * 50)

    try:
        run_demo(args.duration, args.seed, args.workers, console)
    except KeyboardInterrupt:
        console.print("\n⏹️  Demo stopped by user")


if __name__ == "__main__":
    main()
