"""
Plain-text reports rendered with Jinja2 templates
"""

import logging
from fractions import Fraction
from typing import Any, Dict

from jinja2 import Environment

from utils.serialization import format_fraction

logger = logging.getLogger(__name__)

TEMPLATES = {
    "verify": """\
{% for r in results -%}
{{ '✓' if r.success else '✗' }} {{ r.suite }}: {{ r.total }} identities checked
{% for identity, count in r.checked.items() %}    {{ identity }}: {{ count }}
{% endfor %}{% if r.mismatch %}    mismatch in {{ r.mismatch.identity }} at {{ r.mismatch.params }}
      expected {{ r.mismatch.expected }}, got {{ r.mismatch.actual }}
{% endif %}{% if r.error %}    error: {{ r.error }}
{% endif %}{% endfor -%}
{{ '✓ all suites passed' if success else '✗ verification failed' }}
""",
    "l2": """\
{{ family }} n={{ n }}{% if symmetrized %} (symmetrized){% endif %}
  method: {{ method }}
  scale:  {{ scale }}
  value:  {{ value | rational }}{% if approx is not none %} ≈ {{ '%.10f' | format(approx) }}{% endif %}
""",
    "search-shift": """\
n={{ n }}, a={{ a or '-' }}
  best shift: {{ shift }} ({{ mode }}, {{ evaluated }} evaluations)
  value:      {{ value | rational }}
  average:    {{ average | rational }}
""",
    "counterexample": """\
a = 1^{{ '{' }}{{ n - 1 }}{{ '}' }}, shift = 0, n={{ n }}
  corner coefficient: {{ mu_corner | rational }} {{ '<=' if mu_corner <= one_over_N else '>' }} 1/N = {{ one_over_N | rational }}
  (2^n L2)^2:         {{ l2sq_scaled | rational }}
  ratio to n^2/64:    {{ '%.6f' | format(n_sq_ratio) }}
""",
}


class ReportRenderer:
    """文本报告渲染器"""

    def __init__(self):
        self.env = Environment(trim_blocks=False, keep_trailing_newline=True)
        self.env.filters['rational'] = lambda v: format_fraction(v) if isinstance(v, Fraction) else v

    def render(self, kind: str, context: Dict[str, Any]) -> str:
        """
        渲染报告

        Args:
            kind: 模板名（verify、l2、search-shift、counterexample）
            context: 模板变量
        Returns:
            报告文本
        """
        if kind not in TEMPLATES:
            raise KeyError(f"no text report for {kind}")
        return self.env.from_string(TEMPLATES[kind]).render(**context)
