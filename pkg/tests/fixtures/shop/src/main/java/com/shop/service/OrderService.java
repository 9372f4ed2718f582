package com.shop.service;

public interface OrderService extends EntityService<Object> {

    Object placeOrder(long cartId);
}
