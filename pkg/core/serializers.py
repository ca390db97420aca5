import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from rest_framework import serializers

from .exceptions import DomainError
from .numeric import as_rational

COMMANDS = ('table', 'llt', 'zeros', 'curves', 'verify')


class RationalField(serializers.Field):
    """Exact rational read from an int, a decimal string or "p/q"; written as "p/q"."""

    default_error_messages = {'invalid': 'Expected a rational number such as 2, 0.5 or 7/2.'}

    def to_internal_value(self, data):
        try:
            return as_rational(data)
        except DomainError:
            self.fail('invalid')

    def to_representation(self, value):
        value = Fraction(value)
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


class FiniteFloatField(serializers.FloatField):
    """Float that renders inf and nan as null, keeping the JSON strict."""

    def to_representation(self, value):
        if value is None:
            return None
        value = float(value)
        return value if math.isfinite(value) else None


class RateReportSerializer(serializers.Serializer):
    label = serializers.CharField()
    family = serializers.IntegerField(allow_null=True)
    theta = serializers.CharField(allow_null=True)
    z_or_t = serializers.CharField(allow_null=True)
    n_values = serializers.ListField(child=serializers.IntegerField())
    errors = serializers.ListField(child=FiniteFloatField(allow_null=True))
    fitted_slope = FiniteFloatField(allow_null=True)
    passed = serializers.BooleanField()
    expected_slope = serializers.FloatField()
    tolerance = serializers.FloatField()
    notes = serializers.ListField(child=serializers.CharField())


class CheckResultSerializer(serializers.Serializer):
    name = serializers.CharField()
    status = serializers.ChoiceField(choices=['passed', 'failed', 'error'])
    reports = RateReportSerializer(many=True)
    values = serializers.SerializerMethodField()
    error = serializers.CharField(allow_null=True)

    def get_values(self, obj):
        return _clean(obj['values'] if isinstance(obj, dict) else obj.values)


def _clean(value):
    """Recursively map values to JSON: complex -> [re, im], non-finite -> None."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return RationalField().to_representation(value)
    if isinstance(value, complex):
        return [_clean(value.real), _clean(value.imag)]
    value = float(value)
    return value if math.isfinite(value) else None


@dataclass
class RunConfig:
    command: str
    family: Optional[int] = None
    n: Optional[int] = None
    theta: Optional[Fraction] = None
    thetas: List[Fraction] = field(default_factory=list)
    z: List[complex] = field(default_factory=list)
    t: List[float] = field(default_factory=list)
    grid: int = 200
    precision: int = 256
    out: Optional[str] = None
    format: str = 'csv'
    relaxed: bool = False


class RunConfigSerializer(serializers.Serializer):
    command = serializers.ChoiceField(choices=COMMANDS)
    family = serializers.ChoiceField(choices=[1, 2, 3], required=False, allow_null=True)
    n = serializers.IntegerField(min_value=0, required=False, allow_null=True)
    theta = RationalField(required=False, allow_null=True)
    thetas = serializers.ListField(child=RationalField(), required=False)
    z = serializers.ListField(child=serializers.CharField(), required=False)
    t = serializers.ListField(child=serializers.FloatField(), required=False)
    grid = serializers.IntegerField(min_value=1, default=200)
    precision = serializers.IntegerField(min_value=64, default=256)
    out = serializers.CharField(required=False, allow_null=True, allow_blank=True)
    format = serializers.ChoiceField(choices=['csv', 'json'], default='csv')
    relaxed = serializers.BooleanField(default=False)

    def validate_theta(self, value):
        if value is not None and value <= 0:
            raise serializers.ValidationError('theta must be positive.')
        return value

    def validate_thetas(self, value):
        if not value:
            raise serializers.ValidationError('the theta grid must not be empty.')
        if any(v <= 0 for v in value):
            raise serializers.ValidationError('every theta must be positive.')
        return value

    def validate_z(self, value):
        if not value:
            raise serializers.ValidationError('the z grid must not be empty.')
        try:
            return [complex(v.replace(' ', '').replace('i', 'j')) for v in value]
        except ValueError:
            raise serializers.ValidationError('z values must be numbers such as 0.3 or 0.1+0.1j.')

    def validate_t(self, value):
        if not value:
            raise serializers.ValidationError('the t grid must not be empty.')
        return value

    def validate_out(self, value):
        if value:
            directory = os.path.dirname(os.path.abspath(value))
            if not os.path.isdir(directory):
                raise serializers.ValidationError(f"directory {directory} does not exist.")
            if os.path.isdir(value):
                raise serializers.ValidationError(f"{value} is a directory.")
        return value

    def validate(self, attrs):
        if attrs['command'] in ('llt', 'zeros') and attrs.get('family') is None:
            raise serializers.ValidationError({'family': f"required by {attrs['command']}."})
        if attrs['command'] == 'zeros' and attrs.get('theta') is None:
            raise serializers.ValidationError({'theta': 'required by zeros.'})
        return attrs

    def create(self, validated_data):
        return RunConfig(**validated_data)
