"""
Deterministic CSV and JSON writers for the management commands.

CSV files open with a ``# stirling-lab <version> <command> key=value ...``
comment line followed by a header row. Floats carry 17 significant digits,
exact integers and rationals are written exactly.
"""
import csv
import io
import math
from fractions import Fraction
from typing import Any, Dict, Iterable, Sequence

from rest_framework.renderers import JSONRenderer

from stirling_lab import __version__

from .serializers import RationalField


def format_value(value) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return RationalField().to_representation(value)
    if isinstance(value, str):
        return value
    value = float(value)
    if math.isnan(value):
        return 'nan'
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return format(value, '.17g')


def header_line(command: str, config: Dict[str, Any]) -> str:
    items = ' '.join(f"{key}={_config_value(config[key])}" for key in sorted(config) if config[key] is not None)
    return f"# stirling-lab {__version__} {command} {items}".rstrip()


def _config_value(value) -> str:
    if isinstance(value, (list, tuple)):
        return ','.join(_config_value(v) for v in value)
    if isinstance(value, complex):
        return format(value).strip('()')
    return format_value(value)


def render_csv(command: str, config: Dict[str, Any], header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    buffer.write(header_line(command, config) + '\n')
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def render_json(command: str, config: Dict[str, Any], payload: Any) -> str:
    document = {
        'tool': 'stirling-lab',
        'version': __version__,
        'command': command,
        'config': {key: _config_value(value) for key, value in sorted(config.items()) if value is not None},
        'result': payload,
    }
    return JSONRenderer().render(document, renderer_context={'indent': 2}).decode('utf-8') + '\n'


def write_output(text: str, out, stdout) -> None:
    """Write to the file ``out`` or, when it is empty, to the command's stdout."""
    if out:
        with open(out, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
    else:
        stdout.write(text, ending='')
