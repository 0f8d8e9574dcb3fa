from expression import Error, Ok, Result
from rich.table import Table

from .display import DisplayContext, DisplayResult
from .types import DisplayError


def create_multi_column_table(
    title: str, headers: list[str], rows: list[list[str]]
) -> Result[Table, DisplayError]:
    """Create a multi-column table"""
    if not headers:
        return Error(DisplayError.Validation("Headers list cannot be empty"))
    if not all(len(row) == len(headers) for row in rows):
        return Error(DisplayError.Validation("Row length must match number of columns"))
    try:
        table = Table(title=title)
        table.add_column(headers[0], style="cyan")
        for header in headers[1:]:
            table.add_column(header, justify="right")
        for row in rows:
            table.add_row(*row)
        return Ok(table)
    except Exception as e:
        return Error(DisplayError.Rendering("Failed to create table", e))


def display_table(ctx: DisplayContext, table: Table) -> DisplayResult:
    try:
        ctx.console.print(table)
        return Ok(None)
    except Exception as e:
        return Error(DisplayError.Rendering("Failed to display table", e))


def format_cell(value: float | int | None, digits: int = 1) -> str:
    """Render a numeric table cell; absent values as "-"."""
    match value:
        case None:
            return "-"
        case int():
            return str(value)
        case _:
            return f"{value:.{digits}f}"
