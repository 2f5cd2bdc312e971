"""Tabulated special values: tau, uniformizer value(s) and s2(tau).

One row per (case, tau).  ``value`` is the case's uniformizer; for 2A and 3A
``aux`` is the companion t (resp. u).  ``s2`` is None where E6(tau) = 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .numerics import AlgebraicNumber, QuadraticIrrational, parse_algebraic


@dataclass(frozen=True)
class SpecialValue:
    case: str
    tau: QuadraticIrrational
    value: AlgebraicNumber
    aux: Optional[AlgebraicNumber]
    s2: Optional[AlgebraicNumber]
    tau_text: str

    @property
    def s2_rational(self) -> bool:
        return self.s2 is not None and self.s2.is_rational()


def _row(case, tau, value, s2=None, aux=None) -> SpecialValue:
    return SpecialValue(case, QuadraticIrrational.parse(tau), parse_algebraic(value),
                        parse_algebraic(aux) if aux is not None else None,
                        parse_algebraic(s2) if s2 is not None else None, tau)


SPECIAL_VALUES: List[SpecialValue] = [
    _row("1B", "i", "1/2"),

    _row("2B", "i", "-8"),
    _row("2B", "i/2", "-1/8", "11/21"),
    _row("2B", "sqrt(-2)/2", "-1", "5/14"),
    _row("2B", "(1+sqrt(-3))/4", "1/4", "5/11"),
    _row("2B", "(1+sqrt(-7))/8", "1/64", "85/133"),
    _row("2B", "(-1+sqrt(-3))/2", "4", "0"),
    _row("2B", "(-1+sqrt(-7))/2", "64", "5/21"),

    _row("2C", "i", "1/2"),
    _row("2C", "1+i", "-1"),
    _row("2C", "(1+i)/2", "2"),

    _row("3B", "sqrt(-3)/3", "-1", "5/11"),
    _row("3B", "(-1+sqrt(-3))/2", "9", "0"),
    _row("3B", "(1+sqrt(-3))/6", "1/9", "160/253"),

    _row("2A", "(-1+sqrt(-7))/4", "81/256", "5/21", "(47-45*sqrt(-7))/128"),
    _row("2A", "(-1+sqrt(-3))/2", "-9/16", "0", "4"),
    _row("2A", "(-1+sqrt(-5))/2", "-4", "(139-45*sqrt(5))/418", "9+4*sqrt(5)"),
    _row("2A", "(-1+sqrt(-7))/2", "-3969/256", "5/21", "64"),
    _row("2A", "(-1+sqrt(-9))/2", "-48", "(79-15*sqrt(3))/154", "97+56*sqrt(3)"),
    _row("2A", "(-1+sqrt(-13))/2", "-324", "(2015-125*sqrt(13))/3354", "649+180*sqrt(13)"),
    _row("2A", "(-1+sqrt(-25))/2", "-25920", "(6263-375*sqrt(5))/8778", "51841+23184*sqrt(5)"),
    _row("2A", "(-1+sqrt(-37))/2", "-777924", "(121707985-2054375*sqrt(37))/159196422",
         "1555849+255780*sqrt(37)"),
    _row("2A", "sqrt(-6)/2", "9", "(21-5*sqrt(2))/46", "-17-12*sqrt(2)"),
    _row("2A", "sqrt(-10)/2", "81", "(103-12*sqrt(5))/186", "-161-72*sqrt(5)"),
    _row("2A", "sqrt(-18)/2", "2401", "(712075-49230*sqrt(6))/1074514", "-4801-1960*sqrt(6)"),
    _row("2A", "sqrt(-22)/2", "9801", "(25355-2625*sqrt(2))/36498", "-19601-13860*sqrt(2)"),
    _row("2A", "sqrt(-58)/2", "96059601", "(8424836255-120803060*sqrt(29))/10376469642",
         "-192119201-35675640*sqrt(29)"),
    _row("2A", "i", "81/32", None, "-8"),

    _row("3A", "(-1+sqrt(-3))/2", "-16/9", "0", "9"),
    _row("3A", "(-1+sqrt(-2))/3", "2/27", "5/14", "(23-10*sqrt(-2))/27"),
    _row("3A", "(-1+sqrt(-11))/6", "16/27", "32/77", "-(5+8*sqrt(-11))/27"),
    _row("3A", "(-3+sqrt(-15))/6", "-1/4", "(21-8*sqrt(5))/77", "(3+sqrt(5))/2"),
    _row("3A", "(-3+sqrt(-51))/6", "-16", "(2448-400*sqrt(17))/5593", "33+8*sqrt(17)"),
    _row("3A", "(-3+sqrt(-75))/6", "-80", "(25184-4800*sqrt(5))/46079", "161+72*sqrt(5)"),
    _row("3A", "(-3+sqrt(-123))/6", "-1024", "(27256800-1130560*sqrt(41))/41672113",
         "2049+320*sqrt(41)"),
    _row("3A", "(-3+sqrt(-147))/6", "-3024", "(3847200-193920*sqrt(21))/5621341",
         "6049+1320*sqrt(21)"),
    _row("3A", "(-3+sqrt(-267))/6", "-250000",
         "(4110014282640-66461074000*sqrt(89))/5363953714273", "500001+53000*sqrt(89)"),
    _row("3A", "sqrt(-6)/3", "2", "(21-5*sqrt(2))/46", "-3-2*sqrt(2)"),
    _row("3A", "sqrt(-12)/3", "27/2", "(6015-1500*sqrt(3))/11891", "-26-15*sqrt(3)"),
    _row("3A", "sqrt(-15)/3", "125/4", "(2439-440*sqrt(5))/4543", "-(123+55*sqrt(5))/2"),
]


def rows(case: Optional[str] = None) -> List[SpecialValue]:
    return [r for r in SPECIAL_VALUES if case is None or r.case == case]
