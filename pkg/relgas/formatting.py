"""Lossless CSV/JSON rendering of thermodynamic records."""
import csv
import json

from .serializers import EXTRA_FIELDS, RECORD_FIELDS


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def write_csv(stream, records, fields=RECORD_FIELDS):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(fields)
    for record in records:
        writer.writerow([format_value(record.get(name)) for name in fields])


def write_json(stream, records, fields=RECORD_FIELDS + EXTRA_FIELDS):
    rows = [{name: record.get(name) for name in fields} for record in records]
    stream.write(json.dumps(rows, indent=2, allow_nan=False) + "\n")
