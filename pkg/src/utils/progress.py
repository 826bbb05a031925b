from typing import Dict, Optional

from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn

console = Console(stderr=True)


class BenchProgress:
    """Live progress bar over benchmark runs, one row per method."""

    def __init__(self, *, totals: Dict[str, int], enabled: bool = True):
        self.enabled = enabled
        self.failed: Dict[str, int] = {method: 0 for method in totals}
        self.progress = Progress(
            TextColumn("[bold]{task.description:<10}"),
            BarColumn(),
            MofNCompleteColumn(),
            TextColumn("[red]{task.fields[failed]}"),
            TimeElapsedColumn(),
            console=console,
            disable=not enabled,
        )
        self._tasks = {method: self.progress.add_task(method, total=total, failed="") for method, total in totals.items()}
        self.started = False

    def start(self):
        if not self.started:
            self.progress.start()
            self.started = True

    def stop(self):
        if self.started:
            self.progress.stop()
            self.started = False

    def __enter__(self) -> "BenchProgress":
        self.start()
        return self

    def __exit__(self, *exc) -> None:
        self.stop()

    def update(self, method: str, error: Optional[str] = None):
        """Advance `method` by one run; errors are counted next to the bar."""
        if error is not None:
            self.failed[method] += 1
        failed = f"{self.failed[method]} failed" if self.failed[method] else ""
        self.progress.update(self._tasks[method], advance=1, failed=failed)
