"""Deterministic forward maps from task samples to observations."""

from src.simulators.clouds import Hyperplane, PartialCloudSimulator, hyperplane_cut, make_box_cloud, random_cut
from src.simulators.grasp import ContactObservation, GraspSimulator, finger_directions, grasp_contacts
from src.simulators.kinematics import (
    IkObservation,
    IkSimulator,
    KinematicChain,
    forward_kinematics,
    forward_kinematics_batch,
    ik_simulate,
)
from src.simulators.obstacles import ObstacleSet, Rectangle, check_collision, make_obstacles

__all__ = [
    "ContactObservation",
    "GraspSimulator",
    "Hyperplane",
    "IkObservation",
    "IkSimulator",
    "KinematicChain",
    "ObstacleSet",
    "PartialCloudSimulator",
    "Rectangle",
    "check_collision",
    "finger_directions",
    "forward_kinematics",
    "forward_kinematics_batch",
    "grasp_contacts",
    "hyperplane_cut",
    "ik_simulate",
    "make_box_cloud",
    "make_obstacles",
    "random_cut",
]
