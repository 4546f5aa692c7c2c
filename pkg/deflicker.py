#!/usr/bin/env python3
"""
Deflicker Terminal

Command-line front end for event-camera flicker removal: synthesize test
scenes, run the comb filter over event files and analyse the results.

Usage:
    python deflicker.py <command> [options]

Examples:
    python deflicker.py synth --default --seed 7 scene.txt
    python deflicker.py filter scene.txt filtered.txt --contrast 0.1 --workers 4
    python deflicker.py psd filtered.txt psd.csv --region 24,24,16,16 --tstart 0.2 --tend 1.2
    python deflicker.py snr scene.txt --labels scene.txt.labels --compare filtered.txt --region 24,24,16,16
"""

import sys
import json
import time
import argparse
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from events import (
    EventStreamError, Rect, SensorGeometry,
    read_stream, write_stream, read_labels, write_labels, validate_monotone,
)
from comb import ConfigError, FilterConfig, FilterError, MonotonicityError, filter_stream
from spectral import (
    SpectralError, VARIANTS, bode_table, bode_csv, poles_zeros, poles_zeros_csv, window_psd, attenuation_at,
    attenuation_profile, consecutive_windows,
)
from synth import SceneError, default_scene, load_scene_file, dump_scene, dump_scene_file, generate, with_overrides
from metrics import (
    MetricsError, DEFAULT_WINDOW, snr, snr_improvement, flicker_fraction,
    rate_map, rate_map_csv, rate_map_pgm,
)
from session import RunRecorder

TOOL = "deflicker"
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERRUPTED = 130


class UsageError(Exception):
    """Invalid flags or flag combinations"""
    pass


class TerminalArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors surface as UsageError"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _region(text: str) -> Rect:
    try:
        return Rect.parse(text)
    except EventStreamError as e:
        raise argparse.ArgumentTypeError(str(e))


def _header(command: str, settings: Dict[str, Any]) -> List[str]:
    """Run header lines (no wall-clock values, outputs stay deterministic)"""
    lines = [f"{TOOL} {command}"]
    lines.extend(f"{key}={value}" for key, value in settings.items())
    return lines


class DeflickerTerminal:
    """
    Deflicker Terminal

    Wires event IO, the comb filter bank, scene synthesis and the spectral
    and SNR analyses into subcommands.
    """

    def __init__(self, console: Optional[Console] = None):
        self.console = console or Console()
        self.recorder: Optional[RunRecorder] = None
        self.logger = logging.getLogger('deflicker')

    def _setup_logging(self, verbose: bool = False, log_file: Optional[str] = None) -> logging.Logger:
        """Setup logging configuration"""
        handlers: List[logging.Handler] = [
            RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=False)
        ]
        if log_file:
            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(
                logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
            handlers.append(file_handler)
        logging.basicConfig(
            level=logging.DEBUG if verbose else logging.INFO,
            format='%(message)s',
            handlers=handlers,
            force=True,
        )
        return self.logger

    def build_parser(self) -> TerminalArgumentParser:
        """Parse command line arguments"""
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--verbose', action='store_true', help='Debug logging')
        common.add_argument('--log-file', help='Also log to this file')
        common.add_argument('--record', action='store_true', help='Save a JSON run record')
        common.add_argument('--record-dir', default='recordings', help='Directory for run records')

        comb = argparse.ArgumentParser(add_help=False)
        comb.add_argument('--base-freq', type=float, default=50.0, help='Flicker base frequency f0 (Hz)')
        comb.add_argument('--rho1', type=float, default=0.6, help='Long comb feedback gain')
        comb.add_argument('--rho2', type=float, help='Short comb gain (default: tuned for unit DC gain)')
        comb.add_argument('--tau-ratio', type=int, default=10, help='Integer tau1 / tau2')
        comb.add_argument('--contrast', type=float, default=1.0, help='Log-intensity step per event')
        comb.add_argument('--theta', type=float, help='Sampler threshold (default: contrast)')
        comb.add_argument('--prune-epsilon', type=float, default=1e-9, help='Relative delta amplitude floor')
        comb.add_argument('--ticks-per-tau2', type=int, default=20, help='Delay-line lattice resolution')
        comb.add_argument('--drain-periods', type=float, default=5.0, help='Drain horizon in units of tau1')

        sensor = argparse.ArgumentParser(add_help=False)
        sensor.add_argument('--width', type=int, help='Sensor width (default: inferred)')
        sensor.add_argument('--height', type=int, help='Sensor height (default: inferred)')

        parser = TerminalArgumentParser(
            prog=TOOL,
            description="Deflicker - comb-filter flicker removal for event-camera streams",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog="""
Examples:
  python deflicker.py synth --default --seed 7 scene.txt
  python deflicker.py filter scene.txt filtered.txt --contrast 0.1 --workers 4
  python deflicker.py bode bode.csv --fmin 1 --fmax 5000
  python deflicker.py attenuation scene.txt filtered.txt --region 24,24,16,16 --contrast 0.1
            """
        )
        subparsers = parser.add_subparsers(dest='command', help='Commands',
                                           parser_class=TerminalArgumentParser)

        p = subparsers.add_parser('filter', parents=[common, comb, sensor], help='Remove flicker from an event file')
        p.add_argument('input', help='Input event file')
        p.add_argument('output', help='Output event file')
        p.add_argument('--drain', type=float, help='Seconds to keep filtering after the last event')
        p.add_argument('--workers', type=int, default=1, help='Worker processes (pixel shards)')

        p = subparsers.add_parser('synth', parents=[common], help='Generate a labelled synthetic scene')
        source = p.add_mutually_exclusive_group(required=True)
        source.add_argument('--scene', help='Scene description file')
        source.add_argument('--default', action='store_true', help='Use the built-in fluorescent scene')
        p.add_argument('output', help='Output event file')
        p.add_argument('--labels', help='Label sidecar path (default: <output>.labels)')
        p.add_argument('--seed', type=int, help='Random seed')
        p.add_argument('--duration', type=float, help='Scene duration (s)')
        p.add_argument('--width', type=int, default=64, help='Sensor width for --default')
        p.add_argument('--height', type=int, default=64, help='Sensor height for --default')
        p.add_argument('--dump-scene', help='Also write the resolved scene file here')

        p = subparsers.add_parser('bode', parents=[common, comb], help='Tabulate a frequency response')
        p.add_argument('output', help='Output CSV')
        p.add_argument('--fmin', type=float, default=1.0, help='First frequency (Hz)')
        p.add_argument('--fmax', type=float, default=5000.0, help='Last frequency (Hz)')
        p.add_argument('--ppd', type=int, default=100, help='Points per decade')
        p.add_argument('--variant', choices=VARIANTS, default='proposed', help='Response to tabulate')
        p.add_argument('--tau', type=float, help='Single-comb delay (default 1/f0)')
        p.add_argument('--rho', type=float, help='Feedback comb gain (default rho1)')

        p = subparsers.add_parser('poles', parents=[common, comb], help='Tabulate cascade poles and zeros')
        p.add_argument('output', help='Output CSV')
        p.add_argument('--fmax', type=float, default=1000.0, help='Highest pole/zero frequency (Hz)')

        p = subparsers.add_parser('psd', parents=[common], help='PSD of a region reconstruction')
        p.add_argument('input', help='Input event file')
        p.add_argument('output', help='Output CSV')
        p.add_argument('--region', type=_region, required=True, help='x,y,width,height')
        p.add_argument('--rate', type=float, default=1000.0, help='Reconstruction rate (Hz)')
        p.add_argument('--tstart', type=float, default=0.0, help='Window start (s)')
        p.add_argument('--tend', type=float, help='Window end (s, default: last event)')
        p.add_argument('--contrast', type=float, default=1.0, help='Log-intensity step per event')

        p = subparsers.add_parser('attenuation', parents=[common], help='Band attenuation raw vs filtered')
        p.add_argument('raw', help='Raw event file')
        p.add_argument('filtered', help='Filtered event file')
        p.add_argument('--region', type=_region, required=True, help='x,y,width,height')
        p.add_argument('--freq', type=float, default=100.0, help='Band centre (Hz)')
        p.add_argument('--bandwidth', type=float, default=4.0, help='Band width (Hz)')
        p.add_argument('--rate', type=float, default=1000.0, help='Reconstruction rate (Hz)')
        p.add_argument('--tstart', type=float, default=0.2, help='Window start (s)')
        p.add_argument('--tend', type=float, default=1.2, help='Window end (s)')
        p.add_argument('--contrast', type=float, default=1.0, help='Log-intensity step per event')

        p = subparsers.add_parser('converge', parents=[common], help='Attenuation over successive windows')
        p.add_argument('raw', help='Raw event file')
        p.add_argument('filtered', help='Filtered event file')
        p.add_argument('output', help='Output CSV')
        p.add_argument('--region', type=_region, required=True, help='x,y,width,height')
        p.add_argument('--freq', type=float, default=100.0, help='Band centre (Hz)')
        p.add_argument('--bandwidth', type=float, default=4.0, help='Band width (Hz)')
        p.add_argument('--rate', type=float, default=1000.0, help='Reconstruction rate (Hz)')
        p.add_argument('--tstart', type=float, default=0.0, help='First window start (s)')
        p.add_argument('--window', type=float, default=1.0, help='Window length (s)')
        p.add_argument('--count', type=int, default=4, help='Number of windows')
        p.add_argument('--step', type=float, help='Window stride (default: window length)')
        p.add_argument('--contrast', type=float, default=1.0, help='Log-intensity step per event')

        p = subparsers.add_parser('heatmap', parents=[common, sensor], help='Per-pixel event rate map')
        p.add_argument('input', help='Input event file')
        p.add_argument('output', help='Output CSV')
        p.add_argument('--pgm', help='Also write an 8-bit PGM image')
        p.add_argument('--tstart', type=float, default=0.0, help='Window start (s)')
        p.add_argument('--window', type=float, default=DEFAULT_WINDOW, help='Window length (s)')

        p = subparsers.add_parser('snr', parents=[common], help='Foreground-to-flicker SNR')
        p.add_argument('input', help='Event file (raw when --compare is given)')
        p.add_argument('--labels', help='Label sidecar of the input')
        p.add_argument('--region', type=_region, help='Flicker region mask x,y,width,height')
        p.add_argument('--tstart', type=float, help='Window start (s)')
        p.add_argument('--window', type=float, help='Window length (s, default: whole stream)')
        p.add_argument('--compare', help='Filtered event file to compare against')
        p.add_argument('--output', help='Write JSON report lines here')

        return parser

    # helpers

    def _filter_config(self, args) -> FilterConfig:
        return FilterConfig.from_base_frequency(
            base_frequency=args.base_freq,
            rho1=args.rho1,
            rho2=args.rho2,
            tau_ratio=args.tau_ratio,
            contrast=args.contrast,
            sampler_threshold=args.theta,
            prune_epsilon=args.prune_epsilon,
            ticks_per_tau2=args.ticks_per_tau2,
            drain_periods=args.drain_periods,
        )

    def _geometry(self, args) -> Optional[SensorGeometry]:
        if args.width is None and args.height is None:
            return None
        if args.width is None or args.height is None:
            raise UsageError("--width and --height must be given together")
        try:
            return SensorGeometry(args.width, args.height)
        except EventStreamError as e:
            raise UsageError(str(e))

    def _check_distinct(self, inputs: Sequence[Optional[str]], outputs: Sequence[Optional[str]]) -> None:
        seen = {Path(path).resolve() for path in inputs if path}
        for path in outputs:
            if not path:
                continue
            resolved = Path(path).resolve()
            if resolved in seen:
                raise UsageError(f"Output path {path} would overwrite an input")
            seen.add(resolved)

    def _record(self, role: str, path: Any, events: Optional[int] = None) -> None:
        if self.recorder is not None:
            self.recorder.record_file(role, path, events)

    def _read(self, path: str, geometry: Optional[SensorGeometry] = None):
        stream = read_stream(path, geometry)
        self._record("input", path, len(stream))
        return stream

    def _summary(self, title: str, rows: Dict[str, Any]) -> None:
        table = Table(title=title, show_header=False)
        table.add_column("key", style="cyan")
        table.add_column("value")
        for key, value in rows.items():
            table.add_row(key, str(value))
        self.console.print(table)

    # commands

    def cmd_filter(self, args) -> int:
        if args.workers < 1:
            raise UsageError("--workers must be >= 1")
        if args.drain is not None and args.drain < 0:
            raise UsageError("--drain must be >= 0")
        config = self._filter_config(args)
        geometry = self._geometry(args)
        self._check_distinct([args.input], [args.output])

        stream = self._read(args.input, geometry)
        report = validate_monotone(stream.events)
        if not report.ok:
            line = stream.line_numbers[report.index]
            raise MonotonicityError(
                f"Timestamps not sorted: {report.current} after {report.previous} at line {line}",
                index=report.index)
        geometry = geometry or SensorGeometry.infer(stream.events)

        settings: Dict[str, Any] = dict(config.to_dict())
        settings.update(tau_ratio=config.tau_ratio, tick=config.tick,
                        drain=config.drain_horizon if args.drain is None else args.drain,
                        geometry=str(geometry))
        if self.recorder is not None:
            self.recorder.record_config(settings)

        started = time.perf_counter()
        output = filter_stream(stream.events, geometry, config, workers=args.workers, drain=args.drain)
        elapsed = time.perf_counter() - started

        write_stream(args.output, output, _header("filter", settings))
        self._record("output", args.output, len(output))
        if self.recorder is not None:
            self.recorder.record_counts(input_events=len(stream), output_events=len(output))

        self._summary("filter", {
            "rho1": config.rho1, "rho2": config.rho2, "tau1": config.tau1, "tau2": config.tau2,
            "input events": len(stream), "output events": len(output),
            "elapsed": f"{elapsed:.3f}s",
        })
        return EXIT_OK

    def cmd_synth(self, args) -> int:
        labels_path = args.labels or f"{args.output}.labels"
        inputs = [args.scene] if args.scene else []
        self._check_distinct(inputs, [args.output, labels_path, args.dump_scene])
        if args.duration is not None and args.duration < 0:
            raise UsageError("--duration must be >= 0")

        if args.default:
            try:
                geometry = SensorGeometry(args.width, args.height)
            except EventStreamError as e:
                raise UsageError(str(e))
            scene = default_scene(geometry,
                                  duration=1.5 if args.duration is None else args.duration,
                                  seed=0 if args.seed is None else args.seed)
        else:
            scene = with_overrides(load_scene_file(args.scene), seed=args.seed, duration=args.duration)
            self._record("input", args.scene)

        stream = generate(scene)
        header = _header("synth", {
            key.strip(): value.strip()
            for key, value in (line.split("=", 1) for line in dump_scene(scene).splitlines())
        })
        write_stream(args.output, stream.events, header)
        write_labels(labels_path, stream.labels, header)
        self._record("output", args.output, len(stream))
        self._record("output", labels_path, len(stream))
        if args.dump_scene:
            dump_scene_file(scene, args.dump_scene)
            self._record("output", args.dump_scene)
        if self.recorder is not None:
            self.recorder.record_config(scene.to_dict())
            self.recorder.record_counts(events=len(stream), flicker=stream.flicker_count,
                                        foreground=stream.foreground_count)

        self._summary("synth", {
            "events": len(stream), "flicker": stream.flicker_count,
            "foreground": stream.foreground_count, "seed": scene.seed, "duration": scene.duration,
        })
        return EXIT_OK

    def cmd_bode(self, args) -> int:
        config = self._filter_config(args)
        rows = bode_table(config, args.fmin, args.fmax, args.ppd, variant=args.variant,
                          tau=args.tau, rho=args.rho)
        settings: Dict[str, Any] = {"variant": args.variant}
        settings.update(config.to_dict())
        settings.update(fmin=args.fmin, fmax=args.fmax, ppd=args.ppd)
        if args.variant != "proposed":
            settings.update(tau=config.tau1 if args.tau is None else args.tau,
                            rho=config.rho1 if args.rho is None else args.rho)
        Path(args.output).write_text(bode_csv(rows, _header("bode", settings)), encoding="utf-8")
        self._record("output", args.output)

        deepest = min(rows, key=lambda row: row.magnitude)
        self._summary("bode", {"variant": args.variant, "rows": len(rows),
                               "deepest notch": f"{deepest.mag_db:.1f} dB at {deepest.frequency:.2f} Hz"})
        return EXIT_OK

    def cmd_poles(self, args) -> int:
        config = self._filter_config(args)
        rows = poles_zeros(config, args.fmax)
        settings: Dict[str, Any] = dict(config.to_dict(), fmax=args.fmax)
        Path(args.output).write_text(poles_zeros_csv(rows, _header("poles", settings)), encoding="utf-8")
        self._record("output", args.output)

        live = [row for row in rows if not row.cancelled]
        self._summary("poles", {"rows": len(rows), "cancelled": len(rows) - len(live),
                                "poles": sum(1 for row in live if row.kind == "pole"),
                                "zeros": sum(1 for row in live if row.kind == "zero")})
        return EXIT_OK

    def _window_end(self, events, tend: Optional[float]) -> float:
        if tend is not None:
            return tend
        if not events:
            raise SpectralError("Empty stream: give --tend explicitly")
        return max(event.t for event in events)

    def cmd_psd(self, args) -> int:
        self._check_distinct([args.input], [args.output])
        stream = self._read(args.input)
        t_end = self._window_end(stream.events, args.tend)
        spectrum = window_psd(stream.events, args.region, args.rate, args.tstart, t_end, args.contrast)
        header = _header("psd", {"region": args.region, "rate": args.rate, "tstart": args.tstart,
                                 "tend": t_end, "contrast": args.contrast, "taper": spectrum.taper,
                                 "nfft": spectrum.nfft})
        Path(args.output).write_text(spectrum.to_csv(header), encoding="utf-8")
        self._record("output", args.output)
        self._summary("psd", {"bins": len(spectrum.frequencies),
                              "resolution": f"{spectrum.resolution:.4f} Hz",
                              "peak": f"{spectrum.peak_frequency():.2f} Hz"})
        return EXIT_OK

    def cmd_attenuation(self, args) -> int:
        raw = self._read(args.raw)
        filtered = self._read(args.filtered)
        raw_psd = window_psd(raw.events, args.region, args.rate, args.tstart, args.tend, args.contrast)
        filtered_psd = window_psd(filtered.events, args.region, args.rate, args.tstart, args.tend,
                                  args.contrast)
        value = attenuation_at(raw_psd, filtered_psd, args.freq, args.bandwidth)
        if self.recorder is not None:
            self.recorder.record_counts(attenuation_db=value)
        self._summary("attenuation", {"band": f"{args.freq} ± {args.bandwidth / 2} Hz",
                                      "window": f"[{args.tstart}, {args.tend})",
                                      "attenuation": f"{value:.2f} dB"})
        return EXIT_OK

    def cmd_converge(self, args) -> int:
        self._check_distinct([args.raw, args.filtered], [args.output])
        windows = consecutive_windows(args.tstart, args.window, args.count, args.step or 0.0)
        raw = self._read(args.raw)
        filtered = self._read(args.filtered)
        profile = attenuation_profile(raw.events, filtered.events, args.region, windows,
                                      args.freq, args.bandwidth, args.rate, args.contrast)
        header = _header("converge", {"region": args.region, "freq": args.freq,
                                      "bandwidth": args.bandwidth, "rate": args.rate,
                                      "contrast": args.contrast})
        lines = [f"# {line}" for line in header] + ["t_start,t_end,attenuation_db"]
        lines.extend(f"{s.t_start!r},{s.t_end!r},{s.attenuation_db!r}" for s in profile)
        Path(args.output).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        self._record("output", args.output)

        table = Table(title="converge")
        table.add_column("window")
        table.add_column("attenuation (dB)", justify="right")
        for sample in profile:
            table.add_row(f"[{sample.t_start:g}, {sample.t_end:g})", f"{sample.attenuation_db:.2f}")
        self.console.print(table)
        return EXIT_OK

    def cmd_heatmap(self, args) -> int:
        self._check_distinct([args.input], [args.output, args.pgm])
        geometry = self._geometry(args)
        stream = self._read(args.input, geometry)
        geometry = geometry or SensorGeometry.infer(stream.events)
        rates = rate_map(stream.events, geometry, args.tstart, args.window)
        header = _header("heatmap", {"geometry": geometry, "tstart": args.tstart, "window": args.window})
        Path(args.output).write_text(rate_map_csv(rates, header), encoding="utf-8")
        self._record("output", args.output)
        if args.pgm:
            Path(args.pgm).write_bytes(rate_map_pgm(rates, header))
            self._record("output", args.pgm)
        x, y = rates.argmax()
        self._summary("heatmap", {"events in window": rates.total_events,
                                  "busiest pixel": f"({x}, {y}) at {rates.rate_at(x, y):.1f} ev/s"})
        return EXIT_OK

    def cmd_snr(self, args) -> int:
        if args.labels is None and args.region is None:
            raise UsageError("snr needs --labels or --region")
        if args.compare and args.region is None:
            raise UsageError("--compare needs --region to classify filtered events")
        if args.window is not None and args.window <= 0:
            raise UsageError("--window must be positive")
        self._check_distinct([args.input, args.labels, args.compare], [args.output])

        t_start = args.tstart
        t_end = None
        if args.window is not None:
            t_start = 0.0 if t_start is None else t_start
            t_end = t_start + args.window

        stream = self._read(args.input)
        labels = None
        if args.labels:
            labels = read_labels(args.labels)
            self._record("input", args.labels, len(labels))
        raw = snr(stream.events, t_start, t_end, labels=labels, region=args.region)
        reports = {"raw" if args.compare else "input": raw}

        improvement = None
        if args.compare:
            filtered_stream = self._read(args.compare)
            filtered = snr(filtered_stream.events, t_start, t_end, region=args.region)
            reports["filtered"] = filtered
            if raw.defined and filtered.defined and raw.snr > 0:
                improvement = snr_improvement(raw, filtered)
            else:
                self.logger.warning("⚠️ SNR improvement undefined for this window")

        table = Table(title="snr")
        for column in ("stream", "foreground", "flicker", "snr", "flicker fraction"):
            table.add_column(column, justify="right")
        for name, report in reports.items():
            fraction = flicker_fraction(report)
            table.add_row(name, str(report.foreground_count), str(report.flicker_count),
                          "undefined" if report.snr is None else f"{report.snr:.4f}",
                          "-" if fraction is None else f"{fraction:.1%}")
        self.console.print(table)
        if improvement is not None:
            self.console.print(f"relative SNR improvement: {improvement:.3f}")

        if args.output:
            header = _header("snr", {"tstart": t_start, "window": args.window, "region": args.region,
                                     "labels": args.labels})
            lines = [f"# {line}" for line in header]
            for name, report in reports.items():
                data = report.to_dict()
                data["stream"] = name
                data["flicker_fraction"] = flicker_fraction(report)
                if improvement is not None and name == "filtered":
                    data["improvement"] = improvement
                lines.append(_json_line(data))
            Path(args.output).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
            self._record("output", args.output)
        if self.recorder is not None:
            self.recorder.record_counts(**{f"{name}_snr": report.snr for name, report in reports.items()},
                                        improvement=improvement)
        return EXIT_OK

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        """Parse arguments, dispatch a subcommand and map failures to exit codes"""
        parser = self.build_parser()
        try:
            args = parser.parse_args(argv)
        except UsageError as e:
            self.console.print(f"[red]usage error:[/red] {e}")
            return EXIT_USAGE
        except SystemExit as e:
            return int(e.code or 0)

        if not args.command:
            parser.print_help()
            return EXIT_USAGE

        self._setup_logging(args.verbose, args.log_file)
        if args.record:
            self.recorder = RunRecorder(enabled=True, output_dir=args.record_dir)
            self.recorder.start_run(args.command, vars(args))

        handler = getattr(self, f"cmd_{args.command}")
        try:
            code = handler(args)
        except (UsageError, ConfigError, SceneError) as e:
            self.logger.error(f"❌ {e}")
            code = EXIT_USAGE
        except (EventStreamError, FilterError, SpectralError, MetricsError, OSError) as e:
            self.logger.error(f"💥 {e}")
            code = EXIT_DATA
        except KeyboardInterrupt:
            self.logger.info("🛑 Interrupted by user")
            code = EXIT_INTERRUPTED

        if self.recorder is not None:
            self.recorder.record_counts(exit_code=code)
            self.recorder.save_run()
        return code


def _json_line(data: Dict[str, Any]) -> str:
    return json.dumps({key: (str(value) if isinstance(value, Rect) else value)
                       for key, value in data.items()}, sort_keys=True)


def main(argv: Optional[Sequence[str]] = None, console: Optional[Console] = None) -> int:
    """Main entry point"""
    return DeflickerTerminal(console).run(argv)


if __name__ == "__main__":
    sys.exit(main())
