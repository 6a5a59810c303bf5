# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: 
"""
import sys
import unittest

sys.path.append('..')
from chiraltalbot.constants import (
    CONST,
    K_R,
    NM,
    RotatoryStrength,
    cgs_rotatory_to_si,
    de_broglie_wavelength,
    si_rotatory_to_cgs,
    talbot_length,
)
from chiraltalbot.errors import ConfigError, DomainError


class ConstantsTestCase(unittest.TestCase):

    def test_rotatory_conversion_factor(self):
        self.assertAlmostEqual(K_R / 3.33564e-15, 1.0, delta=1e-5)
        self.assertAlmostEqual(cgs_rotatory_to_si(1e40) / K_R, 1.0, places=12)

    def test_rotatory_conversion_inverse(self):
        r = cgs_rotatory_to_si(-700.0)
        self.assertLess(r, 0)
        self.assertAlmostEqual(si_rotatory_to_cgs(r), -700.0, places=9)

    def test_rotatory_strength_handedness(self):
        self.assertTrue(RotatoryStrength.from_cgs_1e40(700.0).is_right_handed)
        self.assertFalse(RotatoryStrength.from_cgs_1e40(-700.0).is_right_handed)
        self.assertAlmostEqual(RotatoryStrength.from_cgs_1e40(5000.0).value_cgs_1e40, 5000.0, places=8)

    def test_de_broglie_wavelength(self):
        wavelength = de_broglie_wavelength(1000 * CONST.dalton, 140.0)
        self.assertAlmostEqual(wavelength / 2.85e-12, 1.0, delta=0.01)

    def test_talbot_length_hexahelicene(self):
        wavelength = de_broglie_wavelength(328 * CONST.dalton, 180.0)
        length = talbot_length(257 * NM, wavelength)
        self.assertAlmostEqual(length / 9.77e-3, 1.0, delta=0.01)
        self.assertAlmostEqual(50e-3 / length, 5.12, delta=0.01)

    def test_invalid_inputs(self):
        with self.assertRaises(DomainError):
            de_broglie_wavelength(1e-24, 0.0)
        with self.assertRaises(DomainError):
            talbot_length(-1.0, 1e-12)
        # domain errors are configuration errors and value errors at once
        self.assertTrue(issubclass(DomainError, ConfigError))
        self.assertTrue(issubclass(DomainError, ValueError))


if __name__ == '__main__':
    unittest.main()
