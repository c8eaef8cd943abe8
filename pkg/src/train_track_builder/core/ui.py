from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

try:
    import tomllib
except ImportError:
    import tomli as tomllib

from rich.align import Align
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

console = Console()


def get_app_version() -> str:
    """Retrieve the version from package metadata or pyproject.toml."""
    try:
        return version("train-track-builder")
    except PackageNotFoundError:
        pass

    try:
        project_root = Path(__file__).resolve().parent.parent.parent.parent
        pyproject_path = project_root / "pyproject.toml"
        if pyproject_path.exists():
            with open(pyproject_path, "rb") as f:
                return tomllib.load(f)["project"]["version"]
    except Exception:
        pass

    return "0.0.0"


APP_VERSION = get_app_version()


def print_header():
    console.print(
        Panel(
            Align.center(f"[bold white]Train Track Builder v{APP_VERSION}[/bold white]"),
            border_style="cyan",
            padding=(0, 2),
            expand=True,
        )
    )


def format_time(seconds: float) -> str:
    """Format seconds as a short human-readable duration."""
    if seconds < 0:
        return "--"
    if seconds < 1:
        return f"{seconds * 1000:.0f} ms"
    m, s = divmod(seconds, 60)
    if m >= 1:
        return f"{int(m)}m {s:04.1f}s"
    return f"{s:.2f} s"


def _cell(value) -> str:
    if isinstance(value, (dict, list)):
        text = ", ".join(str(v) for v in value) if isinstance(value, list) else f"{len(value)} entries"
        return text if len(text) <= 80 else text[:77] + "..."
    return str(value)


def verdict_style(verdict: str | None) -> str:
    return {"YES": "bold green", "NO": "bold yellow", "BUDGET": "bold red"}.get(verdict or "", "cyan")


def render_report(report) -> None:
    """Print a command report as a panel with one table row per top-level result field."""
    table = Table(show_header=True, header_style="bold magenta", expand=True)
    table.add_column("Field", style="cyan")
    table.add_column("Value")
    for key, value in report.result.items():
        style = verdict_style(value) if key == "verdict" else ""
        table.add_row(key, _cell(value), style=style)
    table.add_section()
    table.add_row("time", format_time(report.elapsed), style="dim")
    table.add_row("exit code", str(report.exit_code), style="dim")
    console.print(Panel(table, title=report.command, border_style=verdict_style(report.result.get("verdict"))))


def show_summary(rows: list[dict]) -> None:
    """Summary table of a corpus run."""
    t = Table(title="Corpus Summary")
    t.add_column("#", style="dim", width=4)
    t.add_column("Automorphism", style="bold cyan")
    t.add_column("Status")
    t.add_column("i", justify="right")
    t.add_column("j", justify="right")
    t.add_column("Bounds", justify="center")

    for i, row in enumerate(rows, start=1):
        ok = not row.get("violations")
        t.add_row(
            str(i),
            row.get("automorphism", ""),
            row.get("status", ""),
            str(row.get("i", "")),
            str(row.get("j", "")),
            "[green]OK[/green]" if ok else "[red]FAIL[/red]",
        )

    console.print(t)
