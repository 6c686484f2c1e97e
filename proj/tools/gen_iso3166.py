#!/usr/bin/env python3
"""Regenerate resources/iso3166.tsv from pycountry plus the hand-kept alias list.

Output columns: alpha3, display_name, alias. One alias per line; the display
name is always emitted as an alias of itself.
"""
import sys

import pycountry

DISPLAY_OVERRIDES = {
    "USA": "United States of America",
    "GBR": "United Kingdom",
    "COD": "Democratic Republic of the Congo",
    "COG": "Republic of the Congo",
    "KOR": "South Korea",
    "PRK": "North Korea",
    "RUS": "Russia",
    "IRN": "Iran",
    "SYR": "Syria",
    "VNM": "Vietnam",
    "LAO": "Laos",
    "BOL": "Bolivia",
    "VEN": "Venezuela",
    "TZA": "Tanzania",
    "MDA": "Moldova",
    "FSM": "Micronesia",
    "CIV": "Côte d'Ivoire",
    "TWN": "Taiwan",
    "PSE": "Palestine",
    "BRN": "Brunei",
    "CPV": "Cabo Verde",
    "SWZ": "Eswatini",
    "TUR": "Türkiye",
    "CZE": "Czechia",
    "VAT": "Holy See",
}

EXTRA_ALIASES = {
    "USA": ["USA", "U.S.A.", "U.S.", "United States"],
    "GBR": ["UK", "U.K.", "Great Britain", "Britain", "England", "Scotland", "Wales"],
    "COD": ["DRC", "DR Congo", "D.R. Congo", "Congo-Kinshasa", "Democratic Republic of Congo", "Zaire"],
    "COG": ["Congo", "Congo-Brazzaville", "Republic of Congo"],
    "KOR": ["Korea", "Republic of Korea"],
    "PRK": ["DPRK", "Democratic People's Republic of Korea"],
    "RUS": ["Russian Federation"],
    "IRN": ["Islamic Republic of Iran"],
    "CIV": ["Cote d'Ivoire", "Ivory Coast"],
    "CZE": ["Czech Republic"],
    "TUR": ["Turkey", "Turkiye"],
    "MMR": ["Burma"],
    "SWZ": ["Swaziland"],
    "CPV": ["Cape Verde"],
    "MKD": ["Macedonia"],
    "ARE": ["UAE", "U.A.E.", "Emirates"],
    "NLD": ["Holland", "The Netherlands"],
    "PHL": ["The Philippines"],
    "GMB": ["The Gambia"],
    "TLS": ["East Timor"],
    "VAT": ["Vatican", "Vatican City"],
    "SAU": ["KSA"],
}


def main(out):
    rows = []
    for c in sorted(pycountry.countries, key=lambda c: c.alpha_3):
        display = DISPLAY_OVERRIDES.get(c.alpha_3, getattr(c, "common_name", None) or c.name)
        aliases = [display, c.name]
        for attr in ("official_name", "common_name"):
            v = getattr(c, attr, None)
            if v:
                aliases.append(v)
        aliases += EXTRA_ALIASES.get(c.alpha_3, [])
        seen = set()
        for a in aliases:
            key = a.casefold()
            if key in seen:
                continue
            seen.add(key)
            rows.append((c.alpha_3, display, a))
    with open(out, "w", encoding="utf-8") as f:
        f.write("# alpha3\tdisplay_name\talias\n")
        for r in rows:
            f.write("\t".join(r) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "resources/iso3166.tsv")
