"""Fragment specs shared by the classification and oracle tests."""

import numpy as np

from koethe_lab.growth_dsl import parse_spec

SAMPLES = {
    "lin": lambda j: j,
    "lsq": lambda j: np.log(j) ** 2 + 1,
    "sq": lambda j: np.sqrt(j),
    "hl": lambda j: 0.5 * np.log(j) + 1,
    "bnd": lambda j: 1.0 / j,
    "fast": lambda j: j ** 2,
}

TEXTS = {
    "s": "q * log(j)",
    "s_half": "q/2 * log(j)",
    "s_sq": "2*q * log(j)",
    "s_shift": "(q + 1) * log(j)",
    "s_quad": "q^2 * log(j)",
    "s_damped": "q * log(j) - j",
    "s_damped_sqrt": "q * log(j) - j^(1/2)",
    "s_plus_log": "q * log(j) + log(j)",
    "flat_log": "log(j)",
    "flat": "1",
    "const_q": "q",
    "lambda_lin": "q * j",
    "lambda_half": "q * j^(1/2)",
    "lambda_three_halves": "q * j^(3/2)",
    "lambda_log": "q/3 * log(j)",
    "lambda_seq": "seq lin class poly(1); log_entry: q * seq(lin)",
    "lambda_logsq": "seq lsq class superlog; log_entry: q * seq(lsq)",
    "lambda_sqrt_seq": "seq sq class poly(1/2); log_entry: q * seq(sq)",
    "mixed_power": "q * log(j) + q * j^(1/2)",
    "mixed_quad": "q^2 * j + q * log(j)",
    "poly_growth": "(2*q + 3) * log(j)",
    "damped_power": "q * j - j^(1/2)",
    "seq_damped": "seq lin class poly(1); log_entry: q * log(j) - seq(lin)",
    "seq_plus_s": "seq sq class poly(1/2); log_entry: q * log(j) + seq(sq)",
    "half_log_series": "seq hl class log; log_entry: q * seq(hl)",
    "bounded_seq": "seq bnd class bounded; log_entry: q * log(j) + seq(bnd)",
    "superpoly_seq": "seq fast class poly(2); log_entry: q * seq(fast)",
    "two_scale": "q * j^(1/3) + 2*q * log(j)",
    "cubic_coeff": "(q^3 + q) * log(j)",
    "offset_const": "q * log(j) + 5",
    "log_damped_j": "q * j^(1/2) - log(j)",
    "s_third": "q/3 * log(j) + q * j^(1/4)",
}


def corpus():
    """name -> spec with sample values attached."""
    out = {}
    for name, body in TEXTS.items():
        if ";" not in body:
            body = f"log_entry: {body}"
        spec = parse_spec(f"matrix {name} {{ {body} }}")
        seqs = {f.name: SAMPLES[f.name] for f in spec.sequences()}
        out[name] = spec.with_samples(seqs) if seqs else spec
    return out


def corpus_text(name: str) -> str:
    body = TEXTS[name]
    if ";" not in body:
        body = f"log_entry: {body}"
    return f"matrix {name} {{ {body} }}\n"
