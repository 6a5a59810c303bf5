# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: Talbot-Lau interferometry of chiral molecules under chiral Casimir-Polder forces
"""
from chiraltalbot.version import __version__
