"""
数据加载服务 - 读写分解文件，解析 "fixture:" 引用，加载外部种子
"""
import logging
from pathlib import Path
from typing import Optional, Union

from lefschetz.core.config import (
    DATA_DIR,
    EXTERNAL_SEED_FILENAME,
    EXTERNAL_SEED_GENUS,
    EXTERNAL_SEED_LENGTH,
    FIXTURE_PREFIX,
)
from lefschetz.core.exceptions import FactorizationFormatError
from lefschetz.services.factorization_service import FactorizationService, PositiveFactorization
from lefschetz.services.fixtures import fixture_exists, get_fixture

logger = logging.getLogger(__name__)


class DataService:
    """数据服务类"""

    @staticmethod
    def load_factorization(source: Union[str, Path], check_relation: bool = True) -> PositiveFactorization:
        """
        加载分解

        Args:
            source: 文件路径，或 "fixture:<id>"
            check_relation: 是否在加载时拒绝不成立的关系

        Returns:
            PositiveFactorization

        Raises:
            FileNotFoundError: 文件不存在
            FactorizationFormatError: 内容不合法或 fixture 名未注册
        """
        text = str(source)
        if text.startswith(FIXTURE_PREFIX):
            name = text[len(FIXTURE_PREFIX):]
            if not fixture_exists(name):
                raise FactorizationFormatError(f"Unknown fixture '{name}'")
            return get_fixture(name)

        path = Path(source)
        if not path.exists():
            raise FileNotFoundError(f"Factorization file not found: {path}")
        f = FactorizationService.deserialize(path.read_text(encoding="utf-8"), check_relation=check_relation)
        logger.debug("Loaded %s: genus %d, %d twists", path, f.genus, f.length)
        return f

    @staticmethod
    def save_factorization(f: PositiveFactorization, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(FactorizationService.serialize(f) + "\n", encoding="utf-8")
        logger.info("✅ Wrote %d twists to %s", f.length, path)
        return path

    @classmethod
    def load_external_seed(cls, path: Optional[Union[str, Path]] = None) -> Optional[PositiveFactorization]:
        """
        加载外部的亏格 9 自旋种子（48 个扭转）

        Args:
            path: 文件路径；省略时查找 DATA_DIR 下的默认文件

        Returns:
            PositiveFactorization；默认文件不存在时返回 None

        Raises:
            FactorizationFormatError: 亏格、长度或底不符合
        """
        if path is None:
            path = DATA_DIR / EXTERNAL_SEED_FILENAME
            if not path.exists():
                logger.debug("No external seed at %s", path)
                return None
        seed = cls.load_factorization(path)
        if seed.genus != EXTERNAL_SEED_GENUS or seed.length != EXTERNAL_SEED_LENGTH or not seed.is_closed:
            raise FactorizationFormatError(
                f"External seed must be a closed genus-{EXTERNAL_SEED_GENUS} factorization with "
                f"{EXTERNAL_SEED_LENGTH} twists, got genus {seed.genus} with {seed.length} twists ({seed.boundary.value})"
            )
        return seed
