from rich.console import Console

# stdout carries CSV/JSON data only.
console = Console(stderr=True)
