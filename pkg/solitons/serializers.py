from dataclasses import asdict

from rest_framework import serializers

from .catalog import family_names
from .config import FORMATS, MODES, default_tolerances


class RunConfigSerializer(serializers.Serializer):
    """Validates a RunConfig before anything is evaluated."""
    mode = serializers.ChoiceField(choices=MODES)
    family = serializers.CharField(allow_null=True, required=False)
    params = serializers.DictField(required=False)
    coordinates = serializers.ListField(child=serializers.CharField(), required=False)
    metric = serializers.DictField(child=serializers.CharField(), required=False)
    potential = serializers.CharField(allow_null=True, required=False)
    phi = serializers.CharField(allow_null=True, required=False)
    lam = serializers.FloatField(allow_null=True, required=False)
    box = serializers.DictField(required=False)
    samples = serializers.IntegerField(min_value=1)
    seed = serializers.IntegerField(min_value=0)
    tolerances = serializers.DictField(child=serializers.FloatField())
    format = serializers.ChoiceField(choices=FORMATS)
    out = serializers.CharField(allow_null=True, required=False)
    n_jobs = serializers.IntegerField()

    def validate_family(self, value):
        if value and value not in family_names():
            raise serializers.ValidationError(
                f'unknown family {value!r} (known: {", ".join(family_names())})')
        return value

    def validate_tolerances(self, value):
        known = set(default_tolerances())
        for name, tol in value.items():
            if known and name not in known:
                raise serializers.ValidationError(f'unknown check {name!r}')
            if not tol > 0.0:
                raise serializers.ValidationError(f'tolerance for {name!r} must be positive')
        return value

    def validate(self, attrs):
        mode = attrs['mode']
        family = attrs.get('family')
        metric = attrs.get('metric') or {}
        if mode == 'verify':
            if bool(family) == bool(metric):
                raise serializers.ValidationError(
                    'verify needs exactly one problem source: --family or a [metric] section')
            if metric:
                if not attrs.get('coordinates'):
                    raise serializers.ValidationError('a [metric] section needs coordinates')
                if not attrs.get('potential'):
                    raise serializers.ValidationError('a custom metric needs a potential')
        elif mode == 'classify':
            if not attrs.get('phi'):
                raise serializers.ValidationError('classify needs --phi')
            if family or metric:
                raise serializers.ValidationError('classify takes --phi only, not a family or metric')
        return attrs

    @classmethod
    def check(cls, config):
        """Validated data for a RunConfig; raises ValidationError."""
        data = asdict(config)
        data['coordinates'] = list(config.coordinates)
        data['metric'] = {f'{a}.{b}': expr for (a, b), expr in config.metric.items()}
        serializer = cls(data=data)
        serializer.is_valid(raise_exception=True)
        return serializer.validated_data


class CheckRecordSerializer(serializers.Serializer):
    """One check; ``pass`` is only a verdict when ``status`` is pass or fail."""
    name = serializers.CharField()
    max_residual = serializers.FloatField(allow_null=True)
    tolerance = serializers.FloatField()
    status = serializers.CharField()
    passed = serializers.BooleanField()
    points_evaluated = serializers.IntegerField()

    def to_representation(self, instance):
        data = super().to_representation(instance)
        data['pass'] = data.pop('passed')
        data['points_evaluated'] = data.pop('points_evaluated')
        return data


class ProfileSerializer(serializers.Serializer):
    ric_spectrum = serializers.ListField(child=serializers.ListField(child=serializers.FloatField()))
    ric_rank = serializers.IntegerField()
    ric_nilpotency = serializers.IntegerField(allow_null=True)
    hf_spectrum = serializers.ListField(child=serializers.ListField(child=serializers.FloatField()))
    grad_f_causal_type = serializers.CharField()
    grad_f_norm_sq = serializers.FloatField()


class CheckReportSerializer(serializers.Serializer):
    problem = serializers.CharField()
    dim = serializers.IntegerField()
    lam = serializers.FloatField()
    checks = CheckRecordSerializer(many=True)
    profile = ProfileSerializer()
    notes = serializers.ListField(child=serializers.CharField())

    def to_representation(self, instance):
        data = super().to_representation(instance)
        return {
            'problem': data['problem'],
            'dim': data['dim'],
            'lambda': data['lam'],
            'checks': data['checks'],
            'profile': data['profile'],
            'notes': data['notes'],
        }


class FamilyMatchSerializer(serializers.Serializer):
    family = serializers.CharField(allow_null=True)
    params = serializers.DictField(child=serializers.FloatField())
    residual = serializers.FloatField(allow_null=True)


class WalkerClassificationSerializer(serializers.Serializer):
    verdict = serializers.CharField()
    alpha = serializers.FloatField(allow_null=True)
    ratio_spread = serializers.FloatField(allow_null=True)
    max_phi_xx = serializers.FloatField()
    max_phi_xxx = serializers.FloatField()
    affine_residual = serializers.FloatField(allow_null=True)
    grid_points = serializers.SerializerMethodField()

    def get_grid_points(self, obj):
        return len(obj.grid)
