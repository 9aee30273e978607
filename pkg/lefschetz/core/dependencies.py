"""
依赖提供 - 命令模块通过这些工厂获取服务
"""
from lefschetz.services.construction_service import ConstructionService
from lefschetz.services.data_service import DataService
from lefschetz.services.factorization_service import FactorizationService
from lefschetz.services.invariant_service import InvariantService


def get_data_service() -> DataService:
    """获取数据服务实例"""
    return DataService()


def get_factorization_service() -> FactorizationService:
    """获取分解服务实例"""
    return FactorizationService()


def get_invariant_service() -> InvariantService:
    """获取不变量服务实例"""
    return InvariantService()


def get_construction_service() -> ConstructionService:
    """获取构造服务实例"""
    return ConstructionService()
