"""Synthetic churn data in the Telco schema.

Bundled stand-in for the public dataset: same 21 columns, same category
vocabularies, label-dependent feature distributions so classifiers have
real signal. Deterministic per seed. Used by the test fixtures and for
demoing the CLI without the external file.
"""

from __future__ import annotations

import csv

import numpy as np

TELCO_CATEGORIES = {
    "gender": ("Female", "Male"),
    "SeniorCitizen": ("0", "1"),
    "Partner": ("No", "Yes"),
    "Dependents": ("No", "Yes"),
    "PhoneService": ("No", "Yes"),
    "MultipleLines": ("No", "No phone service", "Yes"),
    "InternetService": ("DSL", "Fiber optic", "No"),
    "OnlineSecurity": ("No", "No internet service", "Yes"),
    "OnlineBackup": ("No", "No internet service", "Yes"),
    "DeviceProtection": ("No", "No internet service", "Yes"),
    "TechSupport": ("No", "No internet service", "Yes"),
    "StreamingTV": ("No", "No internet service", "Yes"),
    "StreamingMovies": ("No", "No internet service", "Yes"),
    "Contract": ("Month-to-month", "One year", "Two year"),
    "PaperlessBilling": ("No", "Yes"),
    "PaymentMethod": (
        "Bank transfer (automatic)",
        "Credit card (automatic)",
        "Electronic check",
        "Mailed check",
    ),
}

_ADDON_COLS = (
    "OnlineSecurity",
    "OnlineBackup",
    "DeviceProtection",
    "TechSupport",
    "StreamingTV",
    "StreamingMovies",
)

HEADER = (
    "customerID", "gender", "SeniorCitizen", "Partner", "Dependents", "tenure",
    "PhoneService", "MultipleLines", "InternetService", "OnlineSecurity",
    "OnlineBackup", "DeviceProtection", "TechSupport", "StreamingTV",
    "StreamingMovies", "Contract", "PaperlessBilling", "PaymentMethod",
    "MonthlyCharges", "TotalCharges", "Churn",
)


def generate_rows(n_rows: int, seed: int = 0, churn_rate: float = 0.27,
                  blank_fraction: float = 0.002) -> list[list[str]]:
    """Rows (without header) of a synthetic Telco-schema table."""
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n_rows):
        churn = rng.random() < churn_rate
        tenure = int(np.clip(rng.exponential(10 if churn else 34), 1, 72))
        if rng.random() < blank_fraction:
            tenure = 0  # mirrors the real file: blank TotalCharges at tenure 0

        def pick(options, probs):
            return options[rng.choice(len(options), p=probs)]

        gender = pick(TELCO_CATEGORIES["gender"], (0.5, 0.5))
        senior = pick(TELCO_CATEGORIES["SeniorCitizen"], (0.75, 0.25) if churn else (0.87, 0.13))
        partner = pick(TELCO_CATEGORIES["Partner"], (0.64, 0.36) if churn else (0.47, 0.53))
        dependents = pick(TELCO_CATEGORIES["Dependents"], (0.83, 0.17) if churn else (0.66, 0.34))
        phone = pick(TELCO_CATEGORIES["PhoneService"], (0.1, 0.9))
        if phone == "No":
            multiple = "No phone service"
        else:
            multiple = pick(("No", "Yes"), (0.52, 0.48))
        internet = pick(
            TELCO_CATEGORIES["InternetService"],
            (0.25, 0.69, 0.06) if churn else (0.38, 0.35, 0.27),
        )
        addons = {}
        for col in _ADDON_COLS:
            if internet == "No":
                addons[col] = "No internet service"
            else:
                p_yes = 0.22 if churn else 0.45
                addons[col] = "Yes" if rng.random() < p_yes else "No"
        contract = pick(
            TELCO_CATEGORIES["Contract"],
            (0.88, 0.09, 0.03) if churn else (0.43, 0.28, 0.29),
        )
        paperless = pick(TELCO_CATEGORIES["PaperlessBilling"], (0.25, 0.75) if churn else (0.46, 0.54))
        payment = pick(
            TELCO_CATEGORIES["PaymentMethod"],
            (0.14, 0.13, 0.57, 0.16) if churn else (0.25, 0.25, 0.25, 0.25),
        )

        base = {"No": 20.0, "DSL": 45.0, "Fiber optic": 75.0}[internet]
        n_addons = sum(1 for c in _ADDON_COLS if addons[c] == "Yes")
        monthly = base + 5.0 * n_addons + (25.0 if multiple == "Yes" else 0.0)
        monthly += rng.normal(0.0, 3.0)
        monthly = float(np.clip(monthly, 18.25, 118.75))
        if tenure == 0:
            total = ""  # the real file leaves TotalCharges blank at tenure 0
        else:
            total = f"{tenure * monthly * rng.uniform(0.92, 1.02):.2f}"

        rows.append([
            f"{i:04d}-SYNTH", gender, senior, partner, dependents, str(tenure),
            phone, multiple, internet,
            addons["OnlineSecurity"], addons["OnlineBackup"], addons["DeviceProtection"],
            addons["TechSupport"], addons["StreamingTV"], addons["StreamingMovies"],
            contract, paperless, payment,
            f"{monthly:.2f}", total, "Yes" if churn else "No",
        ])
    return rows


def write_csv(path, n_rows: int, seed: int = 0, **kwargs) -> None:
    """Write a synthetic Telco-schema CSV to `path`."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(HEADER)
        writer.writerows(generate_rows(n_rows, seed=seed, **kwargs))
