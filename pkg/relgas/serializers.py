import math

import numpy as np
from rest_framework import serializers

from .eos import METHODS, PhysicalState
from .series import SeriesConfig

STATISTICS = ["fermion", "boson"]
FORMATS = ["json", "csv"]
QUANTITY_CHOICES = ["P", "n", "sc", "s", "eps"]
RECORD_FIELDS = ["T", "mu", "mass", "stat", "method", "lambda", "nu", "P", "n", "rho_sc", "s", "eps", "err_est", "flags"]
EXTRA_FIELDS = ["terms_used", "first_law_residual", "error"]
# record column holding each selectable quantity
QUANTITY_COLUMNS = {"P": "P", "n": "n", "sc": "rho_sc", "s": "s", "eps": "eps"}


class FiniteFloatField(serializers.FloatField):
    default_error_messages = {"not_finite": "A finite number is required."}

    def to_internal_value(self, data):
        value = super().to_internal_value(data)
        if not math.isfinite(value):
            self.fail("not_finite")
        return value


class EvalRequestSerializer(serializers.Serializer):
    T = FiniteFloatField()
    mu = FiniteFloatField(default=0.0)
    mass = FiniteFloatField(min_value=0.0, default=0.0)
    stat = serializers.ChoiceField(choices=STATISTICS, default="fermion")
    method = serializers.ChoiceField(choices=METHODS, default="auto")
    rtol = serializers.FloatField(min_value=1e-16, max_value=1e-2, required=False)
    format = serializers.ChoiceField(choices=FORMATS, default="json")

    def validate_T(self, value):
        if value <= 0:
            raise serializers.ValidationError("Temperature must be positive.")
        return value

    def series_config(self) -> SeriesConfig:
        rtol = self.validated_data.get("rtol")
        return SeriesConfig.from_settings(**({"rtol": rtol} if rtol else {}))

    def to_state(self) -> PhysicalState:
        data = self.validated_data
        return PhysicalState(data["T"], data["mu"], data["mass"], data["stat"])


class TableRequestSerializer(serializers.Serializer):
    mass = FiniteFloatField(min_value=0.0)
    stat = serializers.ChoiceField(choices=STATISTICS, default="fermion")
    t_min = FiniteFloatField()
    t_max = FiniteFloatField()
    t_count = serializers.IntegerField(min_value=1)
    t_spacing = serializers.ChoiceField(choices=["linear", "log"], default="linear")
    mu_min = FiniteFloatField(default=0.0)
    mu_max = FiniteFloatField(default=0.0)
    mu_count = serializers.IntegerField(min_value=1, default=1)
    method = serializers.ChoiceField(choices=METHODS, default="auto")
    format = serializers.ChoiceField(choices=FORMATS, default="csv")
    quantities = serializers.ListField(
        child=serializers.ChoiceField(choices=QUANTITY_CHOICES), default=list(QUANTITY_CHOICES), allow_empty=False
    )
    rtol = serializers.FloatField(min_value=1e-16, max_value=1e-2, required=False)

    def validate(self, attrs):
        if attrs["t_min"] <= 0:
            raise serializers.ValidationError({"t_min": "Temperatures must be positive."})
        if attrs["t_max"] < attrs["t_min"]:
            raise serializers.ValidationError({"t_max": "t_max must not be below t_min."})
        if attrs["mu_max"] < attrs["mu_min"]:
            raise serializers.ValidationError({"mu_max": "mu_max must not be below mu_min."})
        return attrs

    def temperatures(self) -> list:
        data = self.validated_data
        spacing = np.geomspace if data["t_spacing"] == "log" else np.linspace
        return spacing(data["t_min"], data["t_max"], data["t_count"]).tolist()

    def chemical_potentials(self) -> list:
        data = self.validated_data
        return np.linspace(data["mu_min"], data["mu_max"], data["mu_count"]).tolist()

    def series_config(self) -> SeriesConfig:
        rtol = self.validated_data.get("rtol")
        return SeriesConfig.from_settings(**({"rtol": rtol} if rtol else {}))


class ThermoRecordSerializer(serializers.Serializer):
    """One output row for a ThermoSet; P..eps are the dimensional quantities."""

    def get_fields(self):
        return {
            "T": serializers.FloatField(source="state.T"),
            "mu": serializers.FloatField(source="state.mu"),
            "mass": serializers.FloatField(source="state.m"),
            "stat": serializers.CharField(source="state.statistics.value"),
            "method": serializers.CharField(),
            "lambda": serializers.FloatField(source="state.lam"),
            "nu": serializers.FloatField(source="state.nu"),
            "P": serializers.FloatField(source="pressure"),
            "n": serializers.FloatField(source="density"),
            "rho_sc": serializers.FloatField(source="scalar_density"),
            "s": serializers.FloatField(source="entropy"),
            "eps": serializers.FloatField(source="energy"),
            "err_est": serializers.FloatField(source="error_estimate"),
            "flags": serializers.SerializerMethodField(),
            "terms_used": serializers.IntegerField(),
            "first_law_residual": serializers.FloatField(),
        }

    def get_flags(self, obj):
        return ";".join(sorted(obj.flags))

    def to_representation(self, instance):
        record = super().to_representation(instance)
        record["error"] = None
        selected = self.context.get("quantities")
        if selected is not None:
            for name, column in QUANTITY_COLUMNS.items():
                if name not in selected:
                    record[column] = None
        return record

    @staticmethod
    def error_record(T, mu, mass, stat, method, message) -> dict:
        record = {name: None for name in RECORD_FIELDS + EXTRA_FIELDS}
        record.update(T=T, mu=mu, mass=mass, stat=stat, method=method, flags=f"error: {message}")
        record["error"] = message
        return record
