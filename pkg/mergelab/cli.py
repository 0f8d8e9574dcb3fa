"""CLI application entry point for mergelab."""

import typer

from . import __version__
from .commands import COMMAND_CATEGORIES, COMMANDS, COMMANDS_BY_CATEGORY
from .tui import DisplayContext, console, create_multi_column_table, display_table

app = typer.Typer(
    help="""Social on-ramp merging laboratory.

Train merging policies whose reward weighs the ego's own utility against that of the
highway vehicles it merges between, then evaluate, sweep and replay them.""",
    name="mergelab",
    no_args_is_help=True,
)


def version_callback(value: bool) -> None:
    """Print version information and exit."""
    if value:
        console.print(f"[bold]mergelab[/bold] version: [cyan]{__version__}[/cyan]")
        raise typer.Exit()


def show_categories_callback(value: bool) -> None:
    """Show command categories and exit."""
    if value:
        rows = [
            [category, description, ", ".join(COMMANDS_BY_CATEGORY.get(category, {})) or "None"]
            for category, description in COMMAND_CATEGORIES.items()
        ]
        create_multi_column_table(
            "mergelab command categories", ["Category", "Description", "Commands"], rows
        ).bind(lambda table: display_table(DisplayContext(console=console), table))
        raise typer.Exit()


@app.callback()
def callback(
    version: bool = typer.Option(
        None,
        "--version",
        "-v",
        help="Show version information and exit.",
        callback=version_callback,
        is_eager=True,
    ),
    categories: bool = typer.Option(
        None,
        "--categories",
        "-c",
        help="Show command categories and exit.",
        callback=show_categories_callback,
        is_eager=True,
    ),
) -> None:
    """Social on-ramp merging laboratory."""


# commands are already wrapped by handle_command_errors
for cmd_name, (cmd_func, help_text) in COMMANDS.items():
    app.command(name=cmd_name, help=help_text)(cmd_func)


def main() -> None:
    """CLI entry point."""
    app()


if __name__ == "__main__":
    main()
